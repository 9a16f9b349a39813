#pragma once

// Values of positive definite integral quadratic forms Q(x) = x^T G x.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xdq/numtheory.hpp"

namespace xdq {

/// Symmetric integer matrix; Q(x) = sum_ij G[i][j] x_i x_j, so the cross
/// coefficient of x_i x_j (i != j) is 2 G[i][j].
using Gram = std::vector<std::vector<Int>>;

struct RepresentedValues {
  Gram gram;
  Int bound = 0;
  std::vector<Int> values;                   // every nonzero Q(x) <= bound, increasing
  std::map<Int, std::vector<Int>> witnesses;  // value -> first-nonzero-positive, lexicographically least
};

namespace qf {

bool is_symmetric(const Gram& g);

/// Leading principal minors by fraction-free elimination. DomainError if
/// `g` is not square and symmetric or has dimension > 8.
bool is_positive_definite(const Gram& g);

Int evaluate(const Gram& g, std::span<const Int> x);

/// Exact Fincke-Pohst enumeration over the rational LDL^T decomposition.
/// DomainError if `g` is not positive definite or bound < 1.
RepresentedValues represented_values(const Gram& g, Int bound);

Int min_nonzero(const Gram& g);

/// A witness x with Q(x) = target, if one exists.
std::optional<std::vector<Int>> represents(const Gram& g, Int target);

Gram scaled(const Gram& g, Int k);

/// "6,-4;-4,6"
Gram parse_gram(std::string_view text);
std::string format_matrix(const Gram& g);

/// Polynomial notation, e.g. "6x^2-8xy+6y^2"; variables x,y,z,w then x5,...
std::string format_form(const Gram& g);

}  // namespace qf
}  // namespace xdq
