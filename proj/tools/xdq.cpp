// xdq: command line front end for the library.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "xdq/classify.hpp"
#include "xdq/dataio.hpp"
#include "xdq/degpairing.hpp"
#include "xdq/ellcurve.hpp"
#include "xdq/errors.hpp"
#include "xdq/modcurve.hpp"
#include "xdq/qform.hpp"
#include "xdq/remote.hpp"
#include "xdq/units.hpp"

using namespace xdq;

namespace {

std::string data_path;  // --data, overrides XDQ_DATA

const CurveDataset& dataset() {
  static const CurveDataset d = data_path.empty() ? dataio::default_dataset() : dataio::load_dataset(data_path);
  return d;
}

EllipticCurveRecord curve(const std::string& label) {
  if (const auto* e = dataset().find(label)) return *e;
  if (RemoteConfig::from_env().online()) return remote::fetch_remote(label);
  throw UnknownLabelError("curve " + label + " is not in the dataset (set XDQ_LMFDB_URL to fetch it)");
}

// "N:spec"
DeltaSubgroup pair_arg(const std::string& s, bool adjoin) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw DomainError("expected N:<delta-spec>, got '" + s + "'");
  return units::parse_delta(std::stoll(s.substr(0, colon)), s.substr(colon + 1), adjoin);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"intermediate modular curves X_Delta(N) and their quartic points"};
  app.require_subcommand(1);
  app.add_option("--data", data_path, "curve CSV (default: $XDQ_DATA or the bundled file)");

  bool adjoin = true;
  auto adjoin_flag = [&](CLI::App* sub) {
    sub->add_flag("--adjoin-minus-one,!--no-adjoin-minus-one", adjoin, "add -1 to the Delta generators (default on)");
  };

  Int level = 0;
  std::string delta_spec;

  auto* sig = app.add_subcommand("signature", "index, elliptic points, cusps and genus as one CSV row");
  sig->add_option("--level,-N", level)->required();
  sig->add_option("--delta", delta_spec, "generators, e.g. \"4,12\" or \"2^3\"; default: full group");
  sig->add_flag("--header", "print the column names first");
  adjoin_flag(sig);

  std::string label;
  Int p = 0, n = 0;
  auto* ap = app.add_subcommand("ap", "trace of Frobenius");
  ap->add_option("--curve", label)->required();
  ap->add_option("--p", p)->required();
  auto* an = app.add_subcommand("an", "newform coefficient a_n");
  an->add_option("--curve", label)->required();
  an->add_option("--n", n)->required();

  Int iso_degree = 1;
  auto* gram = app.add_subcommand("gram", "degree pairing Gram matrix");
  gram->add_option("--level,-N", level)->required();
  gram->add_option("--curve", label)->required();
  gram->add_option("--delta", delta_spec, "scale by the cover degree of X_Delta(N) -> X_0(N)");
  gram->add_option("--isogeny-degree", iso_degree)->check(CLI::PositiveNumber);
  adjoin_flag(gram);

  std::string gram_text;
  Int bound = 20;
  auto* qfc = app.add_subcommand("qform", "values of a positive definite form up to a bound");
  qfc->add_option("--gram", gram_text, "rows separated by ';', e.g. \"6,-4;-4,6\"")->required();
  qfc->add_option("--bound", bound)->check(CLI::NonNegativeNumber);

  std::string pair;
  bool all = false;
  unsigned workers = 0;
  auto* cls = app.add_subcommand("classify", "verdict for one pair or all candidates");
  auto* pair_opt = cls->add_option("--pair", pair, "N:<delta-spec>");
  cls->add_flag("--all", all)->excludes(pair_opt);
  cls->add_option("--workers,-j", workers);
  adjoin_flag(cls);

  bool check = false;
  auto* table = app.add_subcommand("table", "reproduce the main classification table");
  table->add_flag("--check", check, "exit nonzero on any mismatch")->required();
  table->add_option("--workers,-j", workers);

  auto* fetch = app.add_subcommand("fetch", "fetch a curve record from the configured endpoint");
  fetch->add_option("--label", label)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sig) {
      const DeltaSubgroup d =
          delta_spec.empty() ? units::full_group(level) : units::parse_delta(level, delta_spec, adjoin);
      const auto s = modcurve::signature(level, d);
      if (sig->count("--header")) std::cout << "N,delta_size,index,nu2,nu3,cusps,genus\n";
      std::cout << s.N << ',' << d.size() << ',' << s.mu << ',' << s.nu2 << ',' << s.nu3 << ',' << s.nu_inf << ','
                << s.genus << '\n';
    } else if (*ap) {
      std::cout << ec::ap(curve(label), p) << '\n';
    } else if (*an) {
      std::cout << Newform(curve(label)).an(n) << '\n';
    } else if (*gram) {
      const Newform f(curve(label));
      DegreeForm form = pairing::gram_matrix(f, level);
      if (!delta_spec.empty())
        form = pairing::scale_for_cover(std::move(form), units::index_in_units(units::parse_delta(level, delta_spec, adjoin)));
      if (iso_degree != 1) form = pairing::scale_for_isogeny(std::move(form), iso_degree);
      form = pairing::normalize_signs(std::move(form));
      std::cout << "basis d | N/M:";
      for (Int d : form.divisor_basis) std::cout << ' ' << d;
      std::cout << '\n' << qf::format_matrix(form.gram) << '\n';
      if (form.gram.size() == 2) std::cout << qf::format_form(form.gram) << '\n';
      if (qf::is_positive_definite(form.gram)) std::cout << "min_nonzero " << qf::min_nonzero(form.gram) << '\n';
    } else if (*qfc) {
      const auto rv = qf::represented_values(qf::parse_gram(gram_text), bound);
      for (Int v : rv.values) {
        std::cout << v << " :";
        for (Int x : rv.witnesses.at(v)) std::cout << ' ' << x;
        std::cout << '\n';
      }
    } else if (*cls) {
      const auto& facts = dataio::default_facts();
      if (!pair.empty()) {
        const auto d = pair_arg(pair, adjoin);
        if (!units::is_intermediate(d)) std::cerr << "warning: Delta is not intermediate\n";
        std::cout << classify::verdict(d, dataset(), facts).to_json() << '\n';
      } else if (all) {
        for (const auto& v : classify::classify_all(classify::candidate_pairs(facts), dataset(), facts, workers))
          std::cout << v.N << ',' << units::format_delta(v.delta) << ',' << v.delta.size() << ',' << v.genus << ','
                    << to_string(v.status) << ',' << (v.rules.empty() ? "" : v.rules.back().tag) << '\n';
      } else {
        std::cerr << "classify: give --pair or --all\n";
        return 2;
      }
    } else if (*table) {
      const auto rep = classify::reproduce_main_table(dataset(), dataio::default_facts(), workers);
      std::cout << rep.markdown();
      return rep.ok() ? 0 : 1;
    } else if (*fetch) {
      std::cout << remote::record_to_json(remote::fetch_remote(label)) << '\n';
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
