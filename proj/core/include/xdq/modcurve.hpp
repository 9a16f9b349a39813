#pragma once

// Coset combinatorics of Gamma_Delta(N) in PSL_2(Z): index, elliptic points,
// cusps and genus of X_Delta(N).

#include <cstdint>
#include <vector>

#include "xdq/numtheory.hpp"
#include "xdq/units.hpp"

namespace xdq {

struct Mat2ModN {
  Int a = 1, b = 0, c = 0, d = 1;
  Int n = 1;

  Int det() const { return nt::mod(a * d - b * c, n); }
  Mat2ModN operator*(const Mat2ModN& o) const;
  friend bool operator==(const Mat2ModN&, const Mat2ModN&) = default;
};

using Perm = std::vector<std::int32_t>;

/// Right cosets H g of H = {[[a,b],[0,a^-1]] : a in Delta} in SL_2(Z/NZ).
/// Since H holds every unipotent [[1,b],[0,1]], a coset is determined by the
/// bottom row (c,d) of g up to scaling by Delta.
struct CosetSpace {
  Int N = 1;
  DeltaSubgroup delta;
  std::vector<Mat2ModN> representatives;  // representatives[0] is the identity coset
  Perm perm_T, perm_S, perm_ST;           // coset i maps to perm[i] under right multiplication
};

struct CurveSignature {
  Int N = 1;
  DeltaSubgroup delta;
  Int mu = 0;
  Int nu2 = 0;
  Int nu3 = 0;
  Int nu_inf = 0;
  Int genus = 0;
  std::vector<Int> cusp_widths;  // sorted
};

namespace modcurve {

Mat2ModN T(Int n);
Mat2ModN S(Int n);
Mat2ModN ST(Int n);

bool membership(const Mat2ModN& g, const DeltaSubgroup& delta);

/// Breadth-first from the identity coset under S and T. Throws DomainError
/// unless -1 is in Delta (for N > 2).
CosetSpace coset_space(Int N, const DeltaSubgroup& delta);

CurveSignature signature(Int N, const DeltaSubgroup& delta);
CurveSignature signature(const CosetSpace& cs);
CurveSignature signature_gamma0(Int N);

/// Cycle lengths of a permutation, in order of first element.
std::vector<Int> cycle_lengths(const Perm& p);

/// Number of fixed points.
Int fixed_points(const Perm& p);

}  // namespace modcurve
}  // namespace xdq
