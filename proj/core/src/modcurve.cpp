#include "xdq/modcurve.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "xdq/errors.hpp"

namespace xdq {

Mat2ModN Mat2ModN::operator*(const Mat2ModN& o) const {
  auto m = [&](Int x, Int y, Int z, Int w) { return nt::mod(nt::mul_mod(x, y, n) + nt::mul_mod(z, w, n), n); };
  return Mat2ModN{m(a, o.a, b, o.c), m(a, o.b, b, o.d), m(c, o.a, d, o.c), m(c, o.b, d, o.d), n};
}

namespace modcurve {
namespace {

// Some matrix of determinant 1 with bottom row (c, d).
Mat2ModN lift_row(Int n, Int c, Int d) {
  if (n == 1) return Mat2ModN{0, 0, 0, 0, 1};
  for (Int a = 0; a < n; ++a) {
    // need b*c = a*d - 1 (mod n)
    const Int rhs = nt::mod(a * d - 1, n);
    const Int g = std::gcd(c, n);
    if (rhs % g != 0) continue;
    const Int m = n / g;
    const Int b = m == 1 ? 0 : nt::mul_mod(rhs / g, nt::inv_mod(c / g, m), m);
    Mat2ModN r{a, b, c, d, n};
    if (r.det() == 1 % n) return r;
  }
  throw InvariantViolation("no SL_2 lift of a primitive row");
}

}  // namespace

Mat2ModN T(Int n) { return Mat2ModN{1 % n, 1 % n, 0, 1 % n, n}; }
Mat2ModN S(Int n) { return Mat2ModN{0, nt::mod(-1, n), 1 % n, 0, n}; }
Mat2ModN ST(Int n) { return S(n) * T(n); }

bool membership(const Mat2ModN& g, const DeltaSubgroup& delta) {
  return nt::mod(g.c, g.n) == 0 && delta.contains(g.a);
}

CosetSpace coset_space(Int N, const DeltaSubgroup& delta) {
  if (N < 1) throw DomainError("level must be positive");
  if (delta.modulus != N) throw DomainError("Delta has modulus " + std::to_string(delta.modulus) + ", expected " + std::to_string(N));
  if (!delta.contains(N - 1)) throw DomainError("Delta must contain -1");

  const std::size_t cells = static_cast<std::size_t>(N * N);
  std::vector<std::int32_t> index(cells, -1);
  auto key = [N](Int c, Int d) { return static_cast<std::size_t>(nt::mod(c, N) * N + nt::mod(d, N)); };

  CosetSpace cs;
  cs.N = N;
  cs.delta = delta;
  std::vector<std::pair<Int, Int>> rows;

  auto visit = [&](Int c, Int d) -> std::int32_t {
    c = nt::mod(c, N);
    d = nt::mod(d, N);
    if (const auto i = index[key(c, d)]; i >= 0) return i;
    const auto id = static_cast<std::int32_t>(rows.size());
    for (Int u : delta.elements) index[key(u * c, u * d)] = id;
    rows.emplace_back(c, d);
    return id;
  };

  visit(0, 1);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto [c, d] = rows[i];
    cs.perm_T.push_back(visit(c, c + d));
    cs.perm_S.push_back(visit(d, -c));
    cs.perm_ST.push_back(visit(d, d - c));
  }

  Int j2 = N * N;
  for (const auto& [p, e] : nt::factorize(N).factors) j2 = j2 / (p * p) * (p * p - 1);
  if (static_cast<Int>(rows.size()) * static_cast<Int>(delta.size()) != j2)
    throw InvariantViolation("coset count " + std::to_string(rows.size()) + " does not match J_2(N)/#Delta");

  cs.representatives.reserve(rows.size());
  for (const auto& [c, d] : rows) cs.representatives.push_back(lift_row(N, c, d));
  return cs;
}

std::vector<Int> cycle_lengths(const Perm& p) {
  std::vector<char> seen(p.size(), 0);
  std::vector<Int> out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    Int len = 0;
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(p[j])) {
      seen[j] = 1;
      ++len;
    }
    out.push_back(len);
  }
  return out;
}

Int fixed_points(const Perm& p) {
  Int k = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] == static_cast<std::int32_t>(i)) ++k;
  return k;
}

CurveSignature signature(const CosetSpace& cs) {
  CurveSignature s;
  s.N = cs.N;
  s.delta = cs.delta;
  s.mu = static_cast<Int>(cs.perm_T.size());
  s.nu2 = fixed_points(cs.perm_S);
  s.nu3 = fixed_points(cs.perm_ST);
  s.cusp_widths = cycle_lengths(cs.perm_T);
  std::sort(s.cusp_widths.begin(), s.cusp_widths.end());
  s.nu_inf = static_cast<Int>(s.cusp_widths.size());
  const Int twelve_g = 12 + s.mu - 3 * s.nu2 - 4 * s.nu3 - 6 * s.nu_inf;
  if (twelve_g % 12 != 0 || twelve_g < 0)
    throw InvariantViolation("genus formula gave 12g = " + std::to_string(twelve_g) + " at N = " + std::to_string(cs.N));
  s.genus = twelve_g / 12;
  return s;
}

CurveSignature signature(Int N, const DeltaSubgroup& delta) { return signature(coset_space(N, delta)); }

CurveSignature signature_gamma0(Int N) { return signature(N, units::full_group(N)); }

}  // namespace modcurve
}  // namespace xdq
