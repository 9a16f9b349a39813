#include "xdq/numtheory.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "xdq/errors.hpp"

namespace xdq {

__extension__ using i128 = __int128;

Int Factorization::radical() const {
  Int r = 1;
  for (const auto& pe : factors) r *= pe.prime;
  return r;
}

bool Factorization::squarefree() const {
  for (const auto& pe : factors)
    if (pe.exponent > 1) return false;
  return true;
}

namespace nt {

Factorization factorize(Int n) {
  if (n < 1) throw DomainError("factorize: n must be positive, got " + std::to_string(n));
  Factorization f;
  f.n = n;
  Int m = n;
  for (Int p = 2; p <= m / p; p += (p == 2 ? 1 : 2)) {
    if (m % p != 0) continue;
    int e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    f.factors.push_back({p, e});
  }
  if (m > 1) f.factors.push_back({m, 1});
  return f;
}

std::vector<Int> divisors(const Factorization& f) {
  std::vector<Int> out{1};
  for (const auto& [p, e] : f.factors) {
    const std::size_t base = out.size();
    Int pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Int> divisors(Int n) { return divisors(factorize(n)); }

int moebius(Int n) {
  const auto f = factorize(n);
  if (!f.squarefree()) return 0;
  return f.factors.size() % 2 == 0 ? 1 : -1;
}

Int euler_phi(Int n) {
  Int r = n;
  for (const auto& pe : factorize(n).factors) r = r / pe.prime * (pe.prime - 1);
  return r;
}

Int psi_index(Int n) {
  Int r = n;
  for (const auto& pe : factorize(n).factors) r = r / pe.prime * (pe.prime + 1);
  return r;
}

bool is_prime(Int n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (Int d = 3; d <= n / d; d += 2)
    if (n % d == 0) return false;
  return true;
}

bool is_squarefree(Int n) { return factorize(n).squarefree(); }

Int mul_mod(Int a, Int b, Int m) {
  return static_cast<Int>(static_cast<i128>(mod(a, m)) * mod(b, m) % m);
}

Int pow_mod(Int base, Int exp, Int m) {
  if (exp < 0) return pow_mod(inv_mod(base, m), -exp, m);
  Int result = 1 % m;
  Int b = mod(base, m);
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, b, m);
    b = mul_mod(b, b, m);
    exp >>= 1;
  }
  return result;
}

Int inv_mod(Int a, Int m) {
  Int old_r = mod(a, m), r = m;
  Int old_s = 1, s = 0;
  while (r != 0) {
    const Int q = old_r / r;
    old_r -= q * r;
    std::swap(old_r, r);
    old_s -= q * s;
    std::swap(old_s, s);
  }
  if (old_r != 1 && m != 1)
    throw DomainError("inv_mod: " + std::to_string(a) + " is not invertible mod " + std::to_string(m));
  return mod(old_s, m);
}

Int checked_mul(Int a, Int b) {
#ifdef XDQ_CHECKED_ARITHMETIC
  Int r;
  if (__builtin_mul_overflow(a, b, &r)) throw InvariantViolation("integer overflow in multiplication");
  return r;
#else
  return a * b;
#endif
}

int legendre(Int a, Int p) {
  const Int r = pow_mod(a, (p - 1) / 2, p);
  if (r == 0) return 0;
  return r == 1 ? 1 : -1;
}

}  // namespace nt
}  // namespace xdq
