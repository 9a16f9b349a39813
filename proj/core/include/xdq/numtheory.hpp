#pragma once

// Elementary multiplicative number theory on 64-bit integers.

#include <cstdint>
#include <vector>

namespace xdq {

using Int = std::int64_t;

struct PrimePower {
  Int prime;
  int exponent;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// n = prod p^e, primes strictly increasing. factorize(1) has no factors.
struct Factorization {
  Int n = 1;
  std::vector<PrimePower> factors;

  Int radical() const;
  bool squarefree() const;
};

namespace nt {

/// Trial division. Throws DomainError for n < 1.
Factorization factorize(Int n);

/// All positive divisors in increasing order.
std::vector<Int> divisors(Int n);
std::vector<Int> divisors(const Factorization& f);

int moebius(Int n);
Int euler_phi(Int n);

/// Index of Gamma_0(n) in SL_2(Z): n * prod_{q | n} (1 + 1/q).
Int psi_index(Int n);

bool is_prime(Int n);
bool is_squarefree(Int n);

/// Reduces into [0, m).
constexpr Int mod(Int a, Int m) {
  Int r = a % m;
  return r < 0 ? r + m : r;
}

Int mul_mod(Int a, Int b, Int m);
Int pow_mod(Int base, Int exp, Int m);

/// Inverse of a modulo m; DomainError if gcd(a, m) != 1.
Int inv_mod(Int a, Int m);

/// Multiplication that throws InvariantViolation on overflow. Unchecked
/// (plain multiply) unless XDQ_CHECKED_ARITHMETIC is defined.
Int checked_mul(Int a, Int b);

/// Legendre symbol (a/p) for an odd prime p.
int legendre(Int a, Int p);

}  // namespace nt
}  // namespace xdq
