#pragma once

// Decision pipeline: for each intermediate X_Delta(N) at a level where X_0(N)
// has infinitely many quartic points, decide whether X_Delta(N) does too.

#include <string>
#include <utility>
#include <vector>

#include "xdq/dataio.hpp"
#include "xdq/modcurve.hpp"
#include "xdq/units.hpp"

namespace xdq {

enum class Status { Infinite, Finite, Unknown };

const char* to_string(Status s);

struct Rule {
  std::string tag;
  std::vector<std::pair<std::string, std::string>> params;

  std::string param(const std::string& key) const;  // "" if absent
  friend bool operator==(const Rule&, const Rule&) = default;
};

struct Verdict {
  Int N = 0;
  DeltaSubgroup delta;
  Int index = 0;  // [(Z/NZ)^x : Delta]
  Int genus = -1;
  Status status = Status::Unknown;
  std::vector<Rule> rules;
  std::string blocking_reason;  // set iff Unknown

  bool has_rule(const std::string& tag) const;
  std::string to_json(int indent = 2) const;
};

/// Tags that establish infinitely many quartic points.
bool is_infinitude_rule(const std::string& tag);

namespace classify {

/// Every (N, Delta) with N a quartic X_0 level outside the no-intermediate
/// list and Delta strictly between {±1} and the full group, in (N, Delta) order.
std::vector<DeltaSubgroup> candidate_pairs(const CuratedFacts& facts);

/// The rules never look at any other pair's verdict.
Verdict verdict(const DeltaSubgroup& delta, const CurveDataset& dataset, const CuratedFacts& facts);

/// Parallel map over `pairs`; output order follows input order.
std::vector<Verdict> classify_all(const std::vector<DeltaSubgroup>& pairs, const CurveDataset& dataset,
                                  const CuratedFacts& facts, unsigned workers = 0);

struct TableReport {
  std::vector<DeltaSubgroup> expected;  // blanket levels plus listed pairs
  std::vector<DeltaSubgroup> matches;
  std::vector<DeltaSubgroup> missing;   // expected, not Infinite
  std::vector<DeltaSubgroup> spurious;  // Infinite, not expected
  std::vector<Verdict> unknown;
  std::vector<Verdict> verdicts;

  bool ok() const { return missing.empty() && spurious.empty() && unknown.empty(); }
  std::string markdown() const;
};

TableReport reproduce_main_table(const CurveDataset& dataset, const CuratedFacts& facts, unsigned workers = 0);

}  // namespace classify
}  // namespace xdq
