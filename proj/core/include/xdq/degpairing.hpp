#pragma once

// Degree pairing on maps X_0(N) -> E through the degeneracy maps, and the
// minimal degree of a parametrisation X_Delta(N) -> E for conductor N.

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "xdq/ellcurve.hpp"
#include "xdq/qform.hpp"
#include "xdq/units.hpp"

namespace xdq {

struct ScaleStep {
  std::string kind;  // "cover" or "isogeny"
  Int factor = 1;

  friend bool operator==(const ScaleStep&, const ScaleStep&) = default;
};

struct DegreeForm {
  Int level = 0;
  std::string curve_label;
  Int conductor = 0;
  std::vector<Int> divisor_basis;  // divisors of level/conductor, increasing
  Gram gram;
  std::vector<ScaleStep> scale_log;

  Int total_scale() const;
  friend bool operator==(const DegreeForm&, const DegreeForm&) = default;
};

/// One row of the table of nontrivial E ∩ Σ(N) for even analytic rank.
struct ShimuraRecord {
  Int conductor = 0;
  std::string curve_label;  // empty when the source gives only the level
  Int group_order = 1;
  std::string group_structure;

  friend bool operator==(const ShimuraRecord&, const ShimuraRecord&) = default;
};

/// Minimal parametrisation degree, exact or as the set of values still possible.
struct WeilDegree {
  bool exact = false;
  std::vector<Int> candidates;  // increasing; a single entry when exact
  std::string basis;            // which rule produced it

  Int value() const;  // InvariantViolation unless exact
  Int lower() const { return candidates.front(); }
  Int upper() const { return candidates.back(); }
  /// True iff some candidate divides `degree`.
  bool compatible_with(Int degree) const;
};

namespace pairing {

/// <f∘ι_{d1}, f∘ι_{d2}> on X_0(N) for the newform of conductor M | N.
/// NotApplicable unless N/M is squarefree or coprime to M.
Int pairing_entry(const Newform& f, Int N, Int d1, Int d2);

DegreeForm gram_matrix(const Newform& f, Int N);

DegreeForm scale_for_cover(DegreeForm form, Int delta_index);
DegreeForm scale_for_isogeny(DegreeForm form, Int psi_degree);

/// Flip basis vectors so that every off-diagonal entry of the first row is <= 0.
DegreeForm normalize_signs(DegreeForm form);
Gram normalize_signs(Gram g);

/// d * index / #(E ∩ Σ(Δ)). `records` are the table rows at level N
/// (possibly empty). DomainError on conductor mismatch or when `e` is not
/// the optimal curve of its class.
WeilDegree strong_weil_degree_delta(const EllipticCurveRecord& e, const DeltaSubgroup& delta,
                                    std::span<const ShimuraRecord> records);

/// Whether the injectivity of E^n -> J_Delta(N) has been checked for (N, E).
bool hypothesis_flag_condM(Int N, const EllipticCurveRecord& e,
                           std::span<const std::pair<Int, std::string>> verified);

}  // namespace pairing
}  // namespace xdq
