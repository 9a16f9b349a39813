#pragma once

// The unit group (Z/NZ)^x and its subgroups containing -1.

#include <compare>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xdq/numtheory.hpp"

namespace xdq {

struct UnitGroupStructure {
  Int modulus = 0;
  std::vector<Int> invariant_factors;  // d_1 | d_2 | ... ; empty for the trivial group
  std::vector<Int> generators;         // generators[i] has order invariant_factors[i]
};

/// A subgroup of (Z/NZ)^x, identified by its sorted residue list.
struct DeltaSubgroup {
  Int modulus = 0;
  std::vector<Int> elements;

  std::size_t size() const { return elements.size(); }
  bool contains(Int a) const;

  friend bool operator==(const DeltaSubgroup&, const DeltaSubgroup&) = default;
  friend auto operator<=>(const DeltaSubgroup& a, const DeltaSubgroup& b) {
    if (auto c = a.modulus <=> b.modulus; c != 0) return c;
    if (auto c = a.elements.size() <=> b.elements.size(); c != 0) return c;
    return a.elements <=> b.elements;
  }
};

namespace units {

/// Units of Z/nZ in increasing order. For n = 1 this is {0}.
std::vector<Int> residues(Int n);

Int multiplicative_order(Int a, Int n);

/// Invariant factors from element-order counts; generators are chosen
/// greedily, largest factor first, each the smallest residue of the right
/// order meeting the span of the previous ones trivially (with backtracking).
UnitGroupStructure unit_group(Int n);

DeltaSubgroup full_group(Int n);

/// The subgroup {1, -1}; for n <= 2 this is the whole group.
DeltaSubgroup plus_minus_one(Int n);

DeltaSubgroup subgroup_from_generators(Int n, std::span<const Int> gens, bool adjoin_minus_one = true);

/// All subgroups containing -1, sorted by (size, elements).
std::vector<DeltaSubgroup> subgroups_containing_minus_one(Int n);

/// [(Z/NZ)^x : Delta].
Int index_in_units(const DeltaSubgroup& delta);

bool is_subgroup(const DeltaSubgroup& delta);
bool is_intermediate(const DeltaSubgroup& delta);

/// Parses "4,12^2", "-1,4", "{1,5,19,23}" or the keywords "full" and "pm1".
/// Entries may be negative and may carry an exponent.
DeltaSubgroup parse_delta(Int n, std::string_view spec, bool adjoin_minus_one = true);

/// Lists the elements a <= n/2 as "{±1,±5}" when the group contains -1,
/// otherwise all elements as "{1,4,...}".
std::string format_delta(const DeltaSubgroup& delta);

/// Smallest generating set found by greedy search, for compact display.
std::vector<Int> small_generators(const DeltaSubgroup& delta);

/// "C2 x C2 x C4"; "C1" for the trivial group.
std::string structure_name(const UnitGroupStructure& g);

}  // namespace units
}  // namespace xdq
