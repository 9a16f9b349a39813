#include "xdq/units.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <numeric>

#include "xdq/errors.hpp"

namespace xdq {

bool DeltaSubgroup::contains(Int a) const {
  if (modulus <= 0) return false;
  return std::binary_search(elements.begin(), elements.end(), nt::mod(a, modulus));
}

namespace units {
namespace {

using Mask = std::vector<char>;

DeltaSubgroup from_mask(Int n, const Mask& m) {
  DeltaSubgroup d{n, {}};
  for (Int a = 0; a < n; ++a)
    if (m[a]) d.elements.push_back(a);
  return d;
}

// H * <x>, H given as a mask that is already a subgroup.
Mask adjoin(Int n, const Mask& h, Int x) {
  std::vector<Int> base;
  for (Int a = 0; a < n; ++a)
    if (h[a]) base.push_back(a);
  Mask out = h;
  Int p = nt::mod(x, n);
  while (!h[p]) {
    for (Int a : base) out[nt::mul_mod(a, p, n)] = 1;
    p = nt::mul_mod(p, x, n);
  }
  return out;
}

Mask trivial_mask(Int n) {
  Mask m(static_cast<std::size_t>(std::max<Int>(n, 1)), 0);
  m[static_cast<std::size_t>(1 % n)] = 1;
  return m;
}

void require_modulus(Int n) {
  if (n < 1) throw DomainError("modulus must be positive, got " + std::to_string(n));
}

}  // namespace

std::vector<Int> residues(Int n) {
  require_modulus(n);
  std::vector<Int> out;
  for (Int a = 0; a < n; ++a)
    if (std::gcd(a, n) == 1) out.push_back(a);
  return out;
}

Int multiplicative_order(Int a, Int n) {
  if (std::gcd(nt::mod(a, n), n) != 1)
    throw DomainError(std::to_string(a) + " is not a unit mod " + std::to_string(n));
  const Int one = 1 % n;
  Int k = 1;
  for (Int p = nt::mod(a, n); p != one; p = nt::mul_mod(p, a, n)) ++k;
  return k;
}

UnitGroupStructure unit_group(Int n) {
  if (n < 3) throw DomainError("unit_group: N must be at least 3, got " + std::to_string(n));
  const auto us = residues(n);
  const Int phi = static_cast<Int>(us.size());

  std::vector<Int> orders;
  orders.reserve(us.size());
  for (Int a : us) orders.push_back(multiplicative_order(a, n));

  // For each p | phi, exponents of the cyclic p-parts, largest first.
  std::vector<std::vector<Int>> pparts;  // prime powers
  std::size_t rank = 0;
  for (const auto& [p, e] : nt::factorize(phi).factors) {
    std::vector<Int> count_ge;  // count_ge[k-1] = #cyclic factors with exponent >= k
    Int prev = 1, pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      // x^{p^k} = 1 iff ord(x) | p^k
      Int c = 0;
      for (Int o : orders)
        if (pk % o == 0) ++c;
      Int r = 0;
      for (Int q = c / prev; q > 1; q /= p) ++r;
      count_ge.push_back(r);
      prev = c;
      if (r == 0) break;
    }
    std::vector<Int> powers;  // one per cyclic factor
    const std::size_t nf = count_ge.empty() ? 0 : static_cast<std::size_t>(count_ge[0]);
    for (std::size_t i = 0; i < nf; ++i) {
      Int q = 1;
      for (std::size_t k = 0; k < count_ge.size(); ++k)
        if (static_cast<std::size_t>(count_ge[k]) > i) q *= p;
      powers.push_back(q);
    }
    rank = std::max(rank, powers.size());
    pparts.push_back(std::move(powers));
  }

  UnitGroupStructure g;
  g.modulus = n;
  g.invariant_factors.assign(rank, 1);
  for (const auto& powers : pparts)
    for (std::size_t i = 0; i < powers.size(); ++i) g.invariant_factors[rank - 1 - i] *= powers[i];

  Int prod = 1;
  for (Int d : g.invariant_factors) prod *= d;
  if (prod != phi) throw InvariantViolation("unit_group: invariant factors do not multiply to phi(N)");

  g.generators.assign(rank, 0);
  std::function<bool(std::size_t, const Mask&)> pick = [&](std::size_t left, const Mask& h) -> bool {
    if (left == 0) return true;
    const std::size_t i = left - 1;
    const Int want = g.invariant_factors[i];
    for (std::size_t j = 0; j < us.size(); ++j) {
      if (orders[j] != want) continue;
      // <x> meets H trivially iff no proper power x^k (0<k<ord) lies in H
      const Int x = us[j];
      bool ok = true;
      Int p = x;
      for (Int k = 1; k < want; ++k, p = nt::mul_mod(p, x, n))
        if (h[p]) {
          ok = false;
          break;
        }
      if (!ok) continue;
      g.generators[i] = x;
      if (pick(i, adjoin(n, h, x))) return true;
    }
    return false;
  };
  if (!pick(rank, trivial_mask(n))) throw InvariantViolation("unit_group: no generator set found");
  return g;
}

DeltaSubgroup full_group(Int n) { return DeltaSubgroup{n, residues(n)}; }

DeltaSubgroup plus_minus_one(Int n) {
  require_modulus(n);
  std::vector<Int> e{1 % n, n - 1};
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  return DeltaSubgroup{n, e};
}

DeltaSubgroup subgroup_from_generators(Int n, std::span<const Int> gens, bool adjoin_minus_one) {
  require_modulus(n);
  Mask h = trivial_mask(n);
  if (adjoin_minus_one) h = adjoin(n, h, n - 1);
  for (Int g : gens) {
    if (std::gcd(nt::mod(g, n), n) != 1)
      throw DomainError("generator " + std::to_string(g) + " is not coprime to " + std::to_string(n));
    h = adjoin(n, h, g);
  }
  return from_mask(n, h);
}

std::vector<DeltaSubgroup> subgroups_containing_minus_one(Int n) {
  if (n < 3) throw DomainError("subgroups_containing_minus_one: N must be at least 3");
  const auto us = residues(n);
  std::vector<Mask> found{adjoin(n, trivial_mask(n), n - 1)};
  for (std::size_t i = 0; i < found.size(); ++i) {
    for (Int x : us) {
      if (found[i][x]) continue;
      Mask m = adjoin(n, found[i], x);
      if (std::find(found.begin(), found.end(), m) == found.end()) found.push_back(std::move(m));
    }
  }
  std::vector<DeltaSubgroup> out;
  out.reserve(found.size());
  for (const auto& m : found) out.push_back(from_mask(n, m));
  std::sort(out.begin(), out.end());
  return out;
}

Int index_in_units(const DeltaSubgroup& delta) {
  if (delta.elements.empty()) throw DomainError("empty subgroup");
  return nt::euler_phi(delta.modulus) / static_cast<Int>(delta.size());
}

bool is_subgroup(const DeltaSubgroup& delta) {
  const Int n = delta.modulus;
  if (n < 1 || delta.elements.empty()) return false;
  if (!std::is_sorted(delta.elements.begin(), delta.elements.end())) return false;
  if (!delta.contains(1 % n)) return false;
  for (Int a : delta.elements) {
    if (a < 0 || a >= n || std::gcd(a, n) != 1) return false;
    for (Int b : delta.elements)
      if (!delta.contains(nt::mul_mod(a, b, n))) return false;
  }
  return true;
}

bool is_intermediate(const DeltaSubgroup& delta) {
  const Int n = delta.modulus;
  if (n < 3) return false;
  return delta.size() > 2 && static_cast<Int>(delta.size()) < nt::euler_phi(n);
}

DeltaSubgroup parse_delta(Int n, std::string_view spec, bool adjoin_minus_one) {
  require_modulus(n);
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '{' || s.front() == '<')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '}' || s.back() == '>')) s.remove_suffix(1);
    return s;
  };
  spec = trim(spec);
  if (spec == "full") return full_group(n);
  if (spec == "pm1" || spec.empty()) return plus_minus_one(n);

  auto parse_int = [&](std::string_view s) {
    Int v = 0;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw DomainError("cannot parse '" + std::string(s) + "' in delta spec");
    return v;
  };

  std::vector<Int> gens;
  bool has_pm = false;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    const std::size_t end = std::min(spec.find(',', pos), spec.size());
    std::string_view tok = trim(spec.substr(pos, end - pos));
    pos = end + 1;
    if (tok.empty()) continue;
    for (std::string_view pm : {"±", "+-"}) {
      if (tok.substr(0, pm.size()) == pm) {
        tok.remove_prefix(pm.size());
        has_pm = true;
      }
    }
    const std::size_t caret = tok.find('^');
    Int g = parse_int(caret == std::string_view::npos ? tok : tok.substr(0, caret));
    if (caret != std::string_view::npos) {
      const Int k = parse_int(tok.substr(caret + 1));
      if (std::gcd(nt::mod(g, n), n) != 1)
        throw DomainError("generator " + std::to_string(g) + " is not coprime to " + std::to_string(n));
      g = nt::pow_mod(g, k, n);
    }
    gens.push_back(g);
  }
  return subgroup_from_generators(n, gens, adjoin_minus_one || has_pm);
}

std::string format_delta(const DeltaSubgroup& delta) {
  const Int n = delta.modulus;
  std::string out = "{";
  const bool pm = n > 2 && delta.contains(n - 1);
  bool first = true;
  for (Int a : delta.elements) {
    if (pm && a > n / 2) continue;
    if (!first) out += ',';
    first = false;
    if (pm) out += "±";
    out += std::to_string(a);
  }
  return out + "}";
}

std::vector<Int> small_generators(const DeltaSubgroup& delta) {
  const Int n = delta.modulus;
  Mask h = trivial_mask(n);
  if (n > 2 && delta.contains(n - 1)) h = adjoin(n, h, n - 1);
  std::vector<Int> gens;
  for (Int a : delta.elements) {
    if (h[a]) continue;
    gens.push_back(a);
    h = adjoin(n, h, a);
  }
  return gens;
}

std::string structure_name(const UnitGroupStructure& g) {
  if (g.invariant_factors.empty()) return "C1";
  std::string out;
  for (Int d : g.invariant_factors) {
    if (!out.empty()) out += " x ";
    out += "C" + std::to_string(d);
  }
  return out;
}

}  // namespace units
}  // namespace xdq
