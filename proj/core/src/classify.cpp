#include "xdq/classify.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "xdq/degpairing.hpp"
#include "xdq/errors.hpp"
#include "xdq/qform.hpp"

namespace xdq {

const char* to_string(Status s) {
  switch (s) {
    case Status::Infinite: return "Infinite";
    case Status::Finite: return "Finite";
    case Status::Unknown: return "Unknown";
  }
  return "?";
}

std::string Rule::param(const std::string& key) const {
  for (const auto& [k, v] : params)
    if (k == key) return v;
  return {};
}

bool Verdict::has_rule(const std::string& tag) const {
  return std::any_of(rules.begin(), rules.end(), [&](const Rule& r) { return r.tag == tag; });
}

std::string Verdict::to_json(int indent) const {
  nlohmann::ordered_json j;
  j["N"] = N;
  j["delta"] = units::format_delta(delta);
  j["delta_size"] = delta.size();
  j["generators"] = units::small_generators(delta);
  j["index"] = index;
  j["genus"] = genus;
  j["status"] = xdq::to_string(status);
  auto rs = nlohmann::ordered_json::array();
  for (const auto& r : rules) {
    nlohmann::ordered_json o;
    o["tag"] = r.tag;
    for (const auto& [k, v] : r.params) o[k] = v;
    rs.push_back(o);
  }
  j["rules"] = rs;
  if (status == Status::Unknown) j["blocking_reason"] = blocking_reason;
  return j.dump(indent);
}

bool is_infinitude_rule(const std::string& tag) {
  static const std::vector<std::string> tags{"GenusAtMostOne",         "HyperellipticX21",
                                             "GonalityFour",           "DegreeTwoCoverQuadraticX0",
                                             "CuratedSpecialCase",     "StrongWeilDegreeDivides4",
                                             "GramFormRepresents4"};
  return std::find(tags.begin(), tags.end(), tag) != tags.end();
}

namespace classify {
namespace {

const CuratedPair* find_pair(const std::vector<CuratedPair>& list, const DeltaSubgroup& d) {
  for (const auto& p : list)
    if (p.delta == d) return &p;
  return nullptr;
}

std::string join(const std::vector<Int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::string vec_string(const std::vector<Int>& v) { return "(" + join(v) + ")"; }

enum class Outcome { Eliminated, Infinite, Blocked };

struct FactorResult {
  Outcome outcome;
  Rule rule;
  std::string reason;
};

FactorResult same_level(const EllipticCurveRecord& e, const DeltaSubgroup& delta, const CuratedFacts& facts) {
  const auto records = facts.shimura_at(delta.modulus);
  const WeilDegree w = pairing::strong_weil_degree_delta(e, delta, records);
  Rule r{"", {{"curve", e.label}, {"conductor", std::to_string(e.conductor)}, {"modular_degree", std::to_string(e.modular_degree)}}};
  r.params.emplace_back(w.exact ? "degree" : "degree_candidates", join(w.candidates));
  r.params.emplace_back("basis", w.basis);
  if (!w.compatible_with(4)) {
    r.tag = "StrongWeilDegreeExceeds4";
    return {Outcome::Eliminated, r, {}};
  }
  if (w.exact) {
    r.tag = "StrongWeilDegreeDivides4";
    return {Outcome::Infinite, r, {}};
  }
  return {Outcome::Blocked, r,
          e.label + ": minimal parametrisation degree not determined (candidates " + join(w.candidates) + ")"};
}

FactorResult lower_level(const EllipticCurveRecord& e, const DeltaSubgroup& delta, Int index,
                         const CurveDataset& dataset, const CuratedFacts& facts) {
  const Int N = delta.modulus;
  const Newform f(e);
  DegreeForm form;
  try {
    form = pairing::gram_matrix(f, N);
  } catch (const NotApplicable& ex) {
    return {Outcome::Blocked, {}, e.label + ": " + ex.what()};
  }
  form = pairing::normalize_signs(pairing::scale_for_cover(std::move(form), index));

  // every curve of the class, with the degree of the isogeny from e
  std::vector<std::pair<std::string, Int>> targets{{e.label, 1}};
  for (const auto* c : dataset.isogeny_class(e.isogeny_class)) {
    if (c->label == e.label) continue;
    const Int deg = e.isogeny_degree_to(c->label);
    if (deg < 1) return {Outcome::Blocked, {}, e.label + ": no isogeny degree to " + c->label};
    targets.emplace_back(c->label, deg);
  }

  Rule r{"", {{"curve", e.label}, {"conductor", std::to_string(e.conductor)}}};
  r.params.emplace_back("basis", vec_string(form.divisor_basis));
  r.params.emplace_back("cover_degree", std::to_string(index));
  r.params.emplace_back("form", qf::format_form(form.gram));
  for (const auto& [label, deg] : targets) {
    const DegreeForm g = pairing::scale_for_isogeny(form, deg);
    if (auto w = qf::represents(g.gram, 4)) {
      r.tag = "GramFormRepresents4";
      r.params.emplace_back("target", label);
      r.params.emplace_back("witness", vec_string(*w));
      return {Outcome::Infinite, r, {}};
    }
  }
  if (!pairing::hypothesis_flag_condM(N, e, facts.verified_kernel_pairs))
    return {Outcome::Blocked, {}, e.label + ": injectivity of E^n -> J_Delta(" + std::to_string(N) + ") not verified"};
  r.tag = "GramFormOmits4";
  r.params.emplace_back("min_nonzero", std::to_string(qf::min_nonzero(form.gram)));
  return {Outcome::Eliminated, r, {}};
}

}  // namespace

std::vector<DeltaSubgroup> candidate_pairs(const CuratedFacts& facts) {
  std::vector<DeltaSubgroup> out;
  for (Int N : facts.quartic_x0_levels) {
    if (facts.no_intermediate_levels.count(N) || N < 3) continue;
    for (auto& d : units::subgroups_containing_minus_one(N))
      if (units::is_intermediate(d)) out.push_back(std::move(d));
  }
  std::sort(out.begin(), out.end());
  return out;
}

Verdict verdict(const DeltaSubgroup& delta, const CurveDataset& dataset, const CuratedFacts& facts) {
  Verdict v;
  v.N = delta.modulus;
  v.delta = delta;
  v.index = units::index_in_units(delta);
  const Int N = v.N;

  auto infinite = [&](Rule r) {
    v.rules.push_back(std::move(r));
    v.status = Status::Infinite;
    return v;
  };
  auto unknown = [&](std::string why) {
    v.status = Status::Unknown;
    v.blocking_reason = std::move(why);
    return v;
  };

  const CurveSignature sig = modcurve::signature(N, delta);
  v.genus = sig.genus;

  if (sig.genus <= 1) return infinite({"GenusAtMostOne", {{"genus", std::to_string(sig.genus)}}});
  if (find_pair(facts.hyperelliptic_pairs, delta)) return infinite({"HyperellipticX21", {}});
  if (find_pair(facts.gonality4_pairs, delta)) return infinite({"GonalityFour", {}});
  if (v.index == 2 && facts.x0_infinite_quadratic_levels.count(N))
    return infinite({"DegreeTwoCoverQuadraticX0", {{"base", "X_0(" + std::to_string(N) + ")"}}});
  if (const auto* p = find_pair(facts.special_infinite_pairs, delta)) {
    const auto it = p->attrs.find("reason");
    return infinite({"CuratedSpecialCase", {{"reason", it == p->attrs.end() ? "" : it->second}}});
  }

  const Int min_genus = std::max<Int>(facts.gonality_gt4.min_genus, 8);
  if (sig.genus < min_genus) {
    v.rules.push_back({"GenusBelow8Unresolved", {{"genus", std::to_string(sig.genus)}}});
    return unknown("genus " + std::to_string(sig.genus) + " < 8 and no infinitude rule applies");
  }
  v.rules.push_back({"GenusAtLeast8", {{"genus", std::to_string(sig.genus)}}});
  v.rules.push_back({"GonalityAbove4Assertion", {{"source", facts.gonality_gt4.source}, {"date", facts.gonality_gt4.date}}});

  std::vector<EllipticCurveRecord> factors;
  try {
    factors = dataio::positive_rank_factors(dataset, N);
  } catch (const IncompleteDataError& ex) {
    return unknown(ex.what());
  }
  if (factors.empty()) {
    v.rules.push_back({"NoPositiveRankFactor", {}});
    v.status = Status::Finite;
    return v;
  }

  std::string blocked;
  for (const auto& e : factors) {
    FactorResult r;
    try {
      r = e.conductor == N ? same_level(e, delta, facts) : lower_level(e, delta, v.index, dataset, facts);
    } catch (const Error& ex) {
      r = {Outcome::Blocked, {}, e.label + ": " + ex.what()};
    }
    if (r.outcome == Outcome::Infinite) return infinite(std::move(r.rule));
    if (r.outcome == Outcome::Eliminated) v.rules.push_back(std::move(r.rule));
    else if (blocked.empty()) blocked = r.reason;
  }
  if (!blocked.empty()) return unknown(blocked);
  v.status = Status::Finite;
  return v;
}

std::vector<Verdict> classify_all(const std::vector<DeltaSubgroup>& pairs, const CurveDataset& dataset,
                                  const CuratedFacts& facts, unsigned workers) {
  std::vector<Verdict> out(pairs.size());
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(pairs.size(), 1)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto work = [&] {
    for (std::size_t i; (i = next++) < pairs.size();) {
      try {
        out[i] = verdict(pairs[i], dataset, facts);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::jthread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
  return out;
}

TableReport reproduce_main_table(const CurveDataset& dataset, const CuratedFacts& facts, unsigned workers) {
  TableReport rep;
  const auto pairs = candidate_pairs(facts);
  rep.verdicts = classify_all(pairs, dataset, facts, workers);

  std::set<DeltaSubgroup> expected;
  for (const auto& d : pairs)
    if (facts.main_theorem_blanket_levels.count(d.modulus)) expected.insert(d);
  for (const auto& p : facts.main_theorem_pairs) expected.insert(p.delta);
  rep.expected.assign(expected.begin(), expected.end());

  for (const auto& v : rep.verdicts) {
    const bool want = expected.count(v.delta) > 0;
    if (v.status == Status::Unknown) rep.unknown.push_back(v);
    if (v.status == Status::Infinite) (want ? rep.matches : rep.spurious).push_back(v.delta);
    else if (want) rep.missing.push_back(v.delta);
  }
  // listed pairs that are not candidates at all
  for (const auto& d : rep.expected)
    if (!std::binary_search(pairs.begin(), pairs.end(), d) &&
        std::find(rep.missing.begin(), rep.missing.end(), d) == rep.missing.end())
      rep.missing.push_back(d);
  return rep;
}

std::string TableReport::markdown() const {
  std::ostringstream out;
  auto pair_name = [](const DeltaSubgroup& d) {
    return "(" + std::to_string(d.modulus) + ", " + units::format_delta(d) + ")";
  };
  std::size_t inf = 0, fin = 0;
  for (const auto& v : verdicts) {
    inf += v.status == Status::Infinite;
    fin += v.status == Status::Finite;
  }
  out << "# Main table check\n\n";
  out << "| | count |\n|---|---|\n";
  out << "| candidate pairs | " << verdicts.size() << " |\n";
  out << "| Infinite | " << inf << " |\n";
  out << "| Finite | " << fin << " |\n";
  out << "| Unknown | " << unknown.size() << " |\n";
  out << "| expected Infinite | " << expected.size() << " |\n";
  out << "| matches | " << matches.size() << " |\n";
  out << "| missing | " << missing.size() << " |\n";
  out << "| spurious | " << spurious.size() << " |\n\n";

  auto section = [&](const char* title, const std::vector<DeltaSubgroup>& list) {
    if (list.empty()) return;
    out << "## " << title << "\n\n";
    for (const auto& d : list) out << "- " << pair_name(d) << "\n";
    out << "\n";
  };
  section("Missing", missing);
  section("Spurious", spurious);
  if (!unknown.empty()) {
    out << "## Unknown\n\n";
    for (const auto& v : unknown) out << "- " << pair_name(v.delta) << " genus " << v.genus << ": " << v.blocking_reason << "\n";
    out << "\n";
  }

  out << "## Infinite\n\n| N | Delta | size | genus | rule |\n|---|---|---|---|---|\n";
  for (const auto& v : verdicts)
    if (v.status == Status::Infinite)
      out << "| " << v.N << " | " << units::format_delta(v.delta) << " | " << v.delta.size() << " | " << v.genus << " | "
          << v.rules.back().tag << " |\n";
  out << "\n" << (ok() ? "RESULT: OK" : "RESULT: MISMATCH") << "\n";
  return out.str();
}

}  // namespace classify
}  // namespace xdq
