#include "xdq/ellcurve.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <vector>

#include "xdq/errors.hpp"

namespace xdq {

using boost::multiprecision::cpp_int;

Int EllipticCurveRecord::isogeny_degree_to(std::string_view other) const {
  for (const auto& [l, d] : isogeny_degrees)
    if (l == other) return d;
  return other == label ? 1 : 0;
}

bool EllipticCurveRecord::optimal() const { return !label.empty() && label == isogeny_class + "1"; }

const char* to_string(Reduction r) {
  switch (r) {
    case Reduction::Good: return "good";
    case Reduction::SplitMultiplicative: return "split multiplicative";
    case Reduction::NonSplitMultiplicative: return "non-split multiplicative";
    case Reduction::Additive: return "additive";
  }
  return "?";
}

namespace ec {
namespace {

struct BInv {
  cpp_int b2, b4, b6, b8;
};

BInv binv(const EllipticCurveRecord& e) {
  const cpp_int a1 = e.a1, a2 = e.a2, a3 = e.a3, a4 = e.a4, a6 = e.a6;
  BInv b;
  b.b2 = a1 * a1 + 4 * a2;
  b.b4 = 2 * a4 + a1 * a3;
  b.b6 = a3 * a3 + 4 * a6;
  b.b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
  return b;
}

cpp_int disc_big(const EllipticCurveRecord& e) {
  const auto b = binv(e);
  return -b.b2 * b.b2 * b.b8 - 8 * b.b4 * b.b4 * b.b4 - 27 * b.b6 * b.b6 + 9 * b.b2 * b.b4 * b.b6;
}

cpp_int c4_big(const EllipticCurveRecord& e) {
  const auto b = binv(e);
  return b.b2 * b.b2 - 24 * b.b4;
}

Int mod_big(const cpp_int& v, Int p) {
  cpp_int r = v % p;
  if (r < 0) r += p;
  return r.convert_to<Int>();
}

// y^2 + a1 xy + a3 y - x^3 - a2 x^2 - a4 x - a6 over F_p
Int weierstrass(const EllipticCurveRecord& e, Int p, Int x, Int y) {
  auto m = [p](Int a, Int b) { return nt::mul_mod(a, b, p); };
  Int v = m(y, y) + m(m(e.a1, x), y) + m(e.a3, y);
  v -= m(m(x, x), x) + m(m(e.a2, x), x) + m(e.a4, x) + nt::mod(e.a6, p);
  return nt::mod(v, p);
}

Int brute_affine(const EllipticCurveRecord& e, Int p) {
  Int n = 0;
  for (Int x = 0; x < p; ++x)
    for (Int y = 0; y < p; ++y)
      if (weierstrass(e, p, x, y) == 0) ++n;
  return n;
}

void require_prime(Int p) {
  if (!nt::is_prime(p)) throw DomainError(std::to_string(p) + " is not prime");
}

}  // namespace

std::string discriminant(const EllipticCurveRecord& e) { return disc_big(e).str(); }
std::string c4(const EllipticCurveRecord& e) { return c4_big(e).str(); }

bool is_nonsingular(const EllipticCurveRecord& e) { return disc_big(e) != 0; }

bool bad_prime(const EllipticCurveRecord& e, Int p) { return mod_big(disc_big(e), p) == 0; }

Reduction reduction_type(const EllipticCurveRecord& e, Int p) {
  require_prime(p);
  if (!bad_prime(e, p)) return Reduction::Good;
  if (mod_big(c4_big(e), p) == 0) return Reduction::Additive;

  // Locate the node (x0, y0), then read off the tangent cone
  // Y^2 + a1 XY - (3 x0 + a2) X^2 = 0; split iff its slopes are rational.
  Int x0 = -1;
  if (p == 2) {
    for (Int x = 0; x < 2 && x0 < 0; ++x)
      for (Int y = 0; y < 2; ++y) {
        const bool on = weierstrass(e, 2, x, y) == 0;
        // partial derivatives mod 2
        const bool fx = nt::mod(e.a1 * y - 3 * x * x - 2 * e.a2 * x - e.a4, 2) == 0;
        const bool fy = nt::mod(2 * y + e.a1 * x + e.a3, 2) == 0;
        if (on && fx && fy) {
          x0 = x;
          break;
        }
      }
    if (x0 < 0) throw InvariantViolation("no singular point found mod 2 for " + e.label);
    const Int lin = nt::mod(e.a1, 2), cst = nt::mod(-(3 * x0 + e.a2), 2);
    for (Int t = 0; t < 2; ++t)
      if (nt::mod(t * t + lin * t + cst, 2) == 0) return Reduction::SplitMultiplicative;
    return Reduction::NonSplitMultiplicative;
  }

  // p odd: (2y + a1 x + a3)^2 = f(x), node at the double root of f
  const auto b = binv(e);
  const Int b2 = mod_big(b.b2, p), b4 = mod_big(b.b4, p), b6 = mod_big(b.b6, p);
  auto m = [p](Int a, Int c) { return nt::mul_mod(a, c, p); };
  for (Int x = 0; x < p; ++x) {
    const Int f = nt::mod(4 * m(m(x, x), x) + m(b2, m(x, x)) + 2 * m(b4, x) + b6, p);
    const Int df = nt::mod(12 * m(x, x) + 2 * m(b2, x) + 2 * b4, p);
    if (f == 0 && df == 0) {
      x0 = x;
      break;
    }
  }
  if (x0 < 0) throw InvariantViolation("no singular point found mod " + std::to_string(p) + " for " + e.label);
  return nt::legendre(nt::mod(b2 + 12 * x0, p), p) == 1 ? Reduction::SplitMultiplicative
                                                         : Reduction::NonSplitMultiplicative;
}

Int count_points(const EllipticCurveRecord& e, Int p) {
  require_prime(p);
  if (p <= 3) return brute_affine(e, p) + 1;
  const auto b = binv(e);
  const Int b2 = mod_big(b.b2, p), b4 = mod_big(b.b4, p), b6 = mod_big(b.b6, p);
  // number of square roots of each residue; Legendre symbols for large p
  const bool table = p <= (Int{1} << 20);
  std::vector<unsigned char> roots(table ? static_cast<std::size_t>(p) : 0, 0);
  for (Int y = 0; table && y < p; ++y) ++roots[static_cast<std::size_t>(nt::mul_mod(y, y, p))];
  Int n = 1;
  for (Int x = 0; x < p; ++x) {
    const Int xx = nt::mul_mod(x, x, p);
    const Int f = nt::mod(4 * nt::mul_mod(xx, x, p) + nt::mul_mod(b2, xx, p) + 2 * nt::mul_mod(b4, x, p) + b6, p);
    n += table ? roots[static_cast<std::size_t>(f)] : 1 + nt::legendre(f, p);
  }
  return n;
}

Int ap(const EllipticCurveRecord& e, Int p) {
  switch (reduction_type(e, p)) {
    case Reduction::Good: return p + 1 - count_points(e, p);
    case Reduction::SplitMultiplicative: return 1;
    case Reduction::NonSplitMultiplicative: return -1;
    case Reduction::Additive: return 0;
  }
  return 0;
}

Int an(const EllipticCurveRecord& e, Int n) { return Newform(e).an(n); }

}  // namespace ec

Int Newform::ap(Int p) const {
  {
    std::lock_guard lock(mu_);
    if (auto it = cache_.find(p); it != cache_.end()) return it->second;
  }
  const Int v = ec::ap(curve_, p);
  std::lock_guard lock(mu_);
  cache_.emplace(p, v);
  return v;
}

Int Newform::an(Int n) const {
  if (n < 1) throw DomainError("a_n needs n >= 1");
  Int result = 1;
  for (const auto& [p, k] : nt::factorize(n).factors) {
    const Int a = ap(p);
    const bool bad = curve_.conductor % p == 0;
    Int prev = 1, cur = a;  // a_{p^0}, a_{p^1}
    for (int j = 1; j < k; ++j) {
      const Int next = bad ? nt::checked_mul(cur, a) : nt::checked_mul(a, cur) - nt::checked_mul(p, prev);
      prev = cur;
      cur = next;
    }
    result = nt::checked_mul(result, cur);
  }
  return result;
}

}  // namespace xdq
