#pragma once

// Rational elliptic curves: reduction types, traces of Frobenius and the
// coefficients a_n of the attached newform.

#include <map>
#include <mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xdq/numtheory.hpp"

namespace xdq {

struct EllipticCurveRecord {
  std::string label;
  Int a1 = 0, a2 = 0, a3 = 0, a4 = 0, a6 = 0;
  Int conductor = 0;
  Int rank = 0;
  Int analytic_rank = 0;
  Int modular_degree = 0;
  std::string isogeny_class;
  std::vector<std::pair<std::string, Int>> isogeny_degrees;  // label -> minimal isogeny degree

  /// Minimal degree of an isogeny to `other`; 0 if not listed.
  Int isogeny_degree_to(std::string_view other) const;

  /// Gamma_0(N)-optimal curve of its class: the "1" member.
  bool optimal() const;

  friend bool operator==(const EllipticCurveRecord&, const EllipticCurveRecord&) = default;
};

enum class Reduction { Good, SplitMultiplicative, NonSplitMultiplicative, Additive };

const char* to_string(Reduction r);

namespace ec {

/// Decimal strings, exact.
std::string discriminant(const EllipticCurveRecord& e);
std::string c4(const EllipticCurveRecord& e);

bool is_nonsingular(const EllipticCurveRecord& e);

/// p divides the discriminant of the given model.
bool bad_prime(const EllipticCurveRecord& e, Int p);

/// Assumes the model is minimal at p (dataset contract).
Reduction reduction_type(const EllipticCurveRecord& e, Int p);

/// #E(F_p) for a prime of good reduction, point at infinity included.
Int count_points(const EllipticCurveRecord& e, Int p);

/// Trace of Frobenius; for bad p: +1 split, -1 non-split, 0 additive.
/// DomainError if p is not prime.
Int ap(const EllipticCurveRecord& e, Int p);

/// Newform coefficient, computed from ap through multiplicativity and
/// the Hecke recurrence. Uncached; see Newform for repeated use.
Int an(const EllipticCurveRecord& e, Int n);

}  // namespace ec

/// a_n with a per-curve memo of a_p. Safe to share across threads.
class Newform {
 public:
  explicit Newform(EllipticCurveRecord e) : curve_(std::move(e)) {}

  Int ap(Int p) const;
  Int an(Int n) const;
  const EllipticCurveRecord& curve() const { return curve_; }

 private:
  EllipticCurveRecord curve_;
  mutable std::mutex mu_;
  mutable std::map<Int, Int> cache_;
};

}  // namespace xdq
