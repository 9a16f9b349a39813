#include "xdq/dataio.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "xdq/errors.hpp"

#ifndef XDQ_DEFAULT_DATA_DIR
#define XDQ_DEFAULT_DATA_DIR "data"
#endif

namespace xdq {

using boost::multiprecision::cpp_int;

const EllipticCurveRecord* CurveDataset::find(std::string_view label) const {
  for (const auto& c : curves)
    if (c.label == label) return &c;
  return nullptr;
}

std::vector<const EllipticCurveRecord*> CurveDataset::isogeny_class(std::string_view cls) const {
  std::vector<const EllipticCurveRecord*> out;
  for (const auto& c : curves)
    if (c.isogeny_class == cls) out.push_back(&c);
  return out;
}

Int CuratedPair::attr_int(const std::string& key, Int fallback) const {
  auto it = attrs.find(key);
  if (it == attrs.end()) return fallback;
  Int v = 0;
  auto [p, ec] = std::from_chars(it->second.data(), it->second.data() + it->second.size(), v);
  if (ec != std::errc() || p != it->second.data() + it->second.size())
    throw DomainError("attribute " + key + "=" + it->second + " is not an integer");
  return v;
}

std::vector<ShimuraRecord> CuratedFacts::shimura_at(Int N) const {
  std::vector<ShimuraRecord> out;
  for (const auto& r : shimura_table)
    if (r.conductor == N) out.push_back(r);
  return out;
}

namespace dataio {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t e = s.find(sep, pos);
    out.push_back(s.substr(pos, e == std::string_view::npos ? std::string_view::npos : e - pos));
    if (e == std::string_view::npos) break;
    pos = e + 1;
  }
  return out;
}

bool to_int(std::string_view s, Int& v) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && p == s.data() + s.size() && !s.empty();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Checks the model against its conductor; returns an empty string when fine.
std::string model_problem(const EllipticCurveRecord& e) {
  if (!ec::is_nonsingular(e)) return "singular Weierstrass model";
  cpp_int disc(ec::discriminant(e));
  cpp_int c4(ec::c4(e));
  if (disc < 0) disc = -disc;
  for (const auto& [p, k] : nt::factorize(e.conductor).factors) {
    if (disc % p != 0) return "conductor prime " + std::to_string(p) + " does not divide the discriminant";
    int v = 0;
    while (disc % p == 0) {
      disc /= p;
      ++v;
    }
    if (p >= 5 && v >= 12 && c4 % (p * p * p * p) == 0) return "model is not minimal at " + std::to_string(p);
  }
  if (disc != 1) return "discriminant has a prime factor outside the conductor (model not minimal or wrong conductor)";
  return {};
}

}  // namespace

std::string record_problem(const EllipticCurveRecord& e) {
  if (e.label.empty()) return "empty label";
  if (e.isogeny_class.empty()) return "empty isogeny_class";
  if (e.conductor < 1) return "conductor must be positive";
  if (e.rank < 0 || e.analytic_rank < 0) return "negative rank";
  if (e.modular_degree < 1) return "modular_degree must be >= 1";
  return model_problem(e);
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols{"label",  "conductor",     "a1",
                                             "a2",     "a3",            "a4",
                                             "a6",     "rank",          "analytic_rank",
                                             "modular_degree", "isogeny_class", "isogeny_degrees"};
  return cols;
}

CurveDataset parse_dataset(std::string_view text, const std::string& source) {
  CurveDataset d;
  std::vector<int> col_of;  // canonical column -> position
  std::size_t line_no = 0;
  std::set<std::string> labels;
  for (std::string_view raw : split(text, '\n')) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      constexpr std::string_view key = "completeness_bound:";
      constexpr std::string_view counts_key = "class_counts:";
      std::string_view rest = trim(line.substr(1));
      if (rest.substr(0, counts_key.size()) == counts_key) {
        std::istringstream in{std::string(rest.substr(counts_key.size()))};
        std::string tok;
        while (in >> tok) {
          const auto colon = tok.find(':');
          Int n = 0, k = 0;
          if (colon == std::string::npos || !to_int(std::string_view(tok).substr(0, colon), n) ||
              !to_int(std::string_view(tok).substr(colon + 1), k) || n < 1 || k < 0)
            throw DataFormatError(source, line_no, "bad class_counts entry '" + tok + "'");
          d.class_counts[n] = k;
        }
      } else if (rest.substr(0, key.size()) == key) {
        Int b = 0;
        if (!to_int(rest.substr(key.size()), b) || b < 0)
          throw DataFormatError(source, line_no, "bad completeness_bound");
        d.completeness_bound = b;
      }
      continue;
    }
    const auto fields = split(line, ',');
    if (col_of.empty()) {
      const auto& cols = csv_columns();
      col_of.assign(cols.size(), -1);
      for (std::size_t i = 0; i < fields.size(); ++i) {
        auto it = std::find(cols.begin(), cols.end(), trim(fields[i]));
        if (it == cols.end()) throw DataFormatError(source, line_no, "unknown column '" + std::string(trim(fields[i])) + "'");
        col_of[static_cast<std::size_t>(it - cols.begin())] = static_cast<int>(i);
      }
      for (std::size_t c = 0; c < cols.size(); ++c)
        if (col_of[c] < 0) throw DataFormatError(source, line_no, "missing column '" + cols[c] + "'");
      continue;
    }
    if (fields.size() != col_of.size())
      throw DataFormatError(source, line_no, "expected " + std::to_string(col_of.size()) + " fields, got " + std::to_string(fields.size()));
    auto field = [&](std::size_t c) { return trim(fields[static_cast<std::size_t>(col_of[c])]); };
    auto integer = [&](std::size_t c) {
      Int v = 0;
      if (!to_int(field(c), v))
        throw DataFormatError(source, line_no, "column " + csv_columns()[c] + ": not an integer: '" + std::string(field(c)) + "'");
      return v;
    };
    EllipticCurveRecord e;
    e.label = std::string(field(0));
    e.conductor = integer(1);
    e.a1 = integer(2);
    e.a2 = integer(3);
    e.a3 = integer(4);
    e.a4 = integer(5);
    e.a6 = integer(6);
    e.rank = integer(7);
    e.analytic_rank = integer(8);
    e.modular_degree = integer(9);
    e.isogeny_class = std::string(field(10));
    for (std::string_view item : split(field(11), ';')) {
      item = trim(item);
      if (item.empty()) continue;
      const auto colon = item.find(':');
      Int deg = 0;
      if (colon == std::string_view::npos || !to_int(item.substr(colon + 1), deg) || deg < 1)
        throw DataFormatError(source, line_no, "bad isogeny_degrees entry '" + std::string(item) + "'");
      e.isogeny_degrees.emplace_back(std::string(trim(item.substr(0, colon))), deg);
    }
    if (!labels.insert(e.label).second) throw DataFormatError(source, line_no, "duplicate label " + e.label);
    if (const auto why = record_problem(e); !why.empty()) throw DataFormatError(source, line_no, e.label + ": " + why);
    d.curves.push_back(std::move(e));
  }
  return d;
}

CurveDataset load_dataset(const std::filesystem::path& path) { return parse_dataset(read_file(path), path.string()); }

std::string serialize_dataset(const CurveDataset& d) {
  std::ostringstream out;
  out << "# completeness_bound: " << d.completeness_bound << "\n";
  if (!d.class_counts.empty()) {
    out << "# class_counts:";
    for (const auto& [n, k] : d.class_counts) out << ' ' << n << ':' << k;
    out << "\n";
  }
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << "\n";
  for (const auto& e : d.curves) {
    out << e.label << ',' << e.conductor << ',' << e.a1 << ',' << e.a2 << ',' << e.a3 << ',' << e.a4 << ',' << e.a6
        << ',' << e.rank << ',' << e.analytic_rank << ',' << e.modular_degree << ',' << e.isogeny_class << ',';
    for (std::size_t i = 0; i < e.isogeny_degrees.size(); ++i)
      out << (i ? ";" : "") << e.isogeny_degrees[i].first << ':' << e.isogeny_degrees[i].second;
    out << "\n";
  }
  return out.str();
}

ApTable load_ap_table(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  ApTable t;
  std::vector<Int> primes;
  std::size_t line_no = 0;
  for (std::string_view raw : split(text, '\n')) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split(line, ',');
    if (primes.empty()) {
      for (std::size_t i = 1; i < fields.size(); ++i) {
        std::string_view f = trim(fields[i]);
        Int p = 0;
        if (f.empty() || f.front() != 'p' || !to_int(f.substr(1), p))
          throw DataFormatError(path.string(), line_no, "bad column '" + std::string(f) + "'");
        primes.push_back(p);
      }
      continue;
    }
    if (fields.size() != primes.size() + 1) throw DataFormatError(path.string(), line_no, "wrong field count");
    auto& row = t[std::string(trim(fields[0]))];
    for (std::size_t i = 0; i < primes.size(); ++i) {
      Int v = 0;
      if (!to_int(fields[i + 1], v)) throw DataFormatError(path.string(), line_no, "not an integer");
      row.emplace_back(primes[i], v);
    }
  }
  return t;
}

CuratedPair parse_pair(std::string_view line) {
  const auto colon = line.find(':');
  if (colon == std::string_view::npos) throw DomainError("expected 'N : spec', got '" + std::string(line) + "'");
  Int n = 0;
  if (!to_int(line.substr(0, colon), n) || n < 1) throw DomainError("bad level in '" + std::string(line) + "'");
  std::string_view rest = line.substr(colon + 1);
  std::string_view extra;
  if (const auto bar = rest.find('|'); bar != std::string_view::npos) {
    extra = rest.substr(bar + 1);
    rest = rest.substr(0, bar);
  }
  CuratedPair cp;
  cp.delta = units::parse_delta(n, trim(rest), true);
  std::istringstream kv{std::string(extra)};
  std::string tok;
  while (kv >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw DomainError("expected key=value, got '" + tok + "'");
    cp.attrs[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  if (const Int size = cp.attr_int("size"); size >= 0 && size != static_cast<Int>(cp.delta.size()))
    throw DomainError("subgroup " + units::format_delta(cp.delta) + " mod " + std::to_string(n) + " has size " +
                      std::to_string(cp.delta.size()) + ", expected " + std::to_string(size));
  return cp;
}

CuratedFacts parse_curated_facts(std::string_view text, const std::string& source) {
  CuratedFacts f;
  std::string section;
  std::size_t line_no = 0;

  auto level_set = [&](std::string_view line, std::set<Int>& out) {
    for (std::string_view tok : split(line, ',')) {
      tok = trim(tok);
      if (tok.empty()) continue;
      const auto dash = tok.find('-');
      Int a = 0, b = 0;
      bool ok = dash == std::string_view::npos ? to_int(tok, a) && to_int(tok, b)
                                               : to_int(tok.substr(0, dash), a) && to_int(tok.substr(dash + 1), b);
      if (!ok || a < 1 || b < a) throw DataFormatError(source, line_no, "bad level or range '" + std::string(tok) + "'");
      for (Int n = a; n <= b; ++n) out.insert(n);
    }
  };
  auto pair_list = [&](std::string_view line, std::vector<CuratedPair>& out) {
    try {
      out.push_back(parse_pair(line));
    } catch (const Error& e) {
      throw DataFormatError(source, line_no, e.what());
    }
  };
  auto key_value = [&](std::string_view line) {
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw DataFormatError(source, line_no, "expected key = value");
    return std::pair{std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1)))};
  };

  for (std::string_view raw : split(text, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw DataFormatError(source, line_no, "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    if (section.empty()) {
      key_value(line);  // file-level metadata such as version
    } else if (section == "quartic_x0_levels") {
      level_set(line, f.quartic_x0_levels);
    } else if (section == "no_intermediate_levels") {
      level_set(line, f.no_intermediate_levels);
    } else if (section == "x0_infinite_quadratic_levels") {
      level_set(line, f.x0_infinite_quadratic_levels);
    } else if (section == "rank0_levels") {
      level_set(line, f.rank0_levels);
    } else if (section == "conductor_n_levels") {
      level_set(line, f.conductor_n_levels);
    } else if (section == "main_theorem_blanket_levels") {
      level_set(line, f.main_theorem_blanket_levels);
    } else if (section == "hyperelliptic_pairs") {
      pair_list(line, f.hyperelliptic_pairs);
    } else if (section == "gonality4_pairs") {
      pair_list(line, f.gonality4_pairs);
    } else if (section == "special_infinite_pairs") {
      pair_list(line, f.special_infinite_pairs);
    } else if (section == "conductor_n_pairs") {
      pair_list(line, f.conductor_n_pairs);
    } else if (section == "main_theorem_pairs") {
      pair_list(line, f.main_theorem_pairs);
    } else if (section == "cubic_table_pairs") {
      pair_list(line, f.cubic_table_pairs);
    } else if (section == "verified_kernel_pairs" || section == "shimura_table") {
      const auto colon = line.find(':');
      Int n = 0;
      if (colon == std::string_view::npos || !to_int(line.substr(0, colon), n))
        throw DataFormatError(source, line_no, "expected 'N : value'");
      const std::string_view val = trim(line.substr(colon + 1));
      if (section == "verified_kernel_pairs") {
        f.verified_kernel_pairs.emplace_back(n, std::string(val));
      } else {
        Int order = 0;
        if (!to_int(val, order) || order < 1) throw DataFormatError(source, line_no, "bad group order");
        f.shimura_table.push_back(ShimuraRecord{n, "", order, "C" + std::to_string(order)});
      }
    } else if (section == "gonality_gt4_assertion") {
      auto [k, v] = key_value(line);
      if (k == "statement") f.gonality_gt4.statement = v;
      else if (k == "source") f.gonality_gt4.source = v;
      else if (k == "date") f.gonality_gt4.date = v;
      else if (k == "min_genus") {
        if (!to_int(v, f.gonality_gt4.min_genus)) throw DataFormatError(source, line_no, "min_genus must be an integer");
      } else throw DataFormatError(source, line_no, "unknown key " + k);
    } else {
      throw DataFormatError(source, line_no, "unknown section [" + section + "]");
    }
  }
  return f;
}

CuratedFacts load_curated_facts(const std::filesystem::path& path) {
  return parse_curated_facts(read_file(path), path.string());
}

std::vector<EllipticCurveRecord> positive_rank_factors(const CurveDataset& d, Int N) {
  if (N > d.completeness_bound)
    throw IncompleteDataError("level " + std::to_string(N) + " exceeds the dataset completeness bound " +
                              std::to_string(d.completeness_bound));
  if (!d.class_counts.empty()) {
    for (Int m : nt::divisors(N)) {
      std::set<std::string> classes, optimal;
      for (const auto& e : d.curves) {
        if (e.conductor != m) continue;
        classes.insert(e.isogeny_class);
        if (e.optimal()) optimal.insert(e.isogeny_class);
      }
      const auto it = d.class_counts.find(m);
      const Int want = it == d.class_counts.end() ? 0 : it->second;
      if (static_cast<Int>(classes.size()) != want || optimal.size() != classes.size())
        throw IncompleteDataError("conductor " + std::to_string(m) + ": dataset has " + std::to_string(optimal.size()) +
                                  " classes with an optimal curve, inventory lists " + std::to_string(want));
    }
  }
  std::vector<EllipticCurveRecord> out;
  for (const auto& e : d.curves)
    if (e.optimal() && N % e.conductor == 0 && e.rank > 0) out.push_back(e);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::pair(a.conductor, a.label) < std::pair(b.conductor, b.label);
  });
  return out;
}

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("XDQ_DATA"); env && *env) {
    std::filesystem::path p(env);
    return std::filesystem::is_directory(p) ? p : p.parent_path();
  }
  return XDQ_DEFAULT_DATA_DIR;
}

std::filesystem::path dataset_path() {
  if (const char* env = std::getenv("XDQ_DATA"); env && *env) {
    std::filesystem::path p(env);
    if (!std::filesystem::is_directory(p)) return p;
  }
  return data_dir() / "curves.csv";
}

const CurveDataset& default_dataset() {
  static const CurveDataset d = load_dataset(dataset_path());
  return d;
}

const CuratedFacts& default_facts() {
  static const CuratedFacts f = load_curated_facts(data_dir() / "curated_facts.txt");
  return f;
}

}  // namespace dataio
}  // namespace xdq
