#pragma once

// Bundled elliptic curve dataset, curated fact tables and their loaders.

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xdq/degpairing.hpp"
#include "xdq/ellcurve.hpp"
#include "xdq/units.hpp"

namespace xdq {

struct CurveDataset {
  std::vector<EllipticCurveRecord> curves;
  Int completeness_bound = 0;
  // conductor -> number of isogeny classes; levels up to the bound that are
  // absent have none. Empty when the file carries no inventory.
  std::map<Int, Int> class_counts;

  const EllipticCurveRecord* find(std::string_view label) const;
  std::vector<const EllipticCurveRecord*> isogeny_class(std::string_view cls) const;
};

/// A subgroup entry of the curated file with its key=value annotations.
struct CuratedPair {
  DeltaSubgroup delta;
  std::map<std::string, std::string> attrs;

  Int level() const { return delta.modulus; }
  Int attr_int(const std::string& key, Int fallback = -1) const;
};

struct GonalityAssertion {
  std::string statement;
  std::string source;
  std::string date;
  Int min_genus = 0;
};

struct CuratedFacts {
  std::set<Int> quartic_x0_levels;
  std::set<Int> no_intermediate_levels;
  std::set<Int> x0_infinite_quadratic_levels;
  std::set<Int> rank0_levels;
  std::vector<CuratedPair> hyperelliptic_pairs;
  std::vector<CuratedPair> gonality4_pairs;
  std::vector<CuratedPair> special_infinite_pairs;
  std::vector<std::pair<Int, std::string>> verified_kernel_pairs;
  std::vector<ShimuraRecord> shimura_table;
  GonalityAssertion gonality_gt4;
  std::set<Int> conductor_n_levels;
  std::vector<CuratedPair> conductor_n_pairs;
  std::set<Int> main_theorem_blanket_levels;
  std::vector<CuratedPair> main_theorem_pairs;
  std::vector<CuratedPair> cubic_table_pairs;

  std::vector<ShimuraRecord> shimura_at(Int N) const;
};

namespace dataio {

/// Header of the curve CSV, in canonical order.
const std::vector<std::string>& csv_columns();

/// Columns may appear in any order; '#' lines are comments, and
/// "# completeness_bound: N" sets the bound and "# class_counts: N:k ..."
/// the class inventory. Rows are validated (unique
/// labels, nonsingular and locally minimal model, conductor primes dividing
/// the discriminant, positive modular degree); failures raise
/// DataFormatError with the line number.
CurveDataset parse_dataset(std::string_view text, const std::string& source = "<memory>");
CurveDataset load_dataset(const std::filesystem::path& path);
std::string serialize_dataset(const CurveDataset& d);

/// Empty when the record passes the row checks of parse_dataset, else the reason.
std::string record_problem(const EllipticCurveRecord& e);

/// label -> [(p, a_p)]
using ApTable = std::map<std::string, std::vector<std::pair<Int, Int>>>;
ApTable load_ap_table(const std::filesystem::path& path);

CuratedFacts parse_curated_facts(std::string_view text, const std::string& source = "<memory>");
CuratedFacts load_curated_facts(const std::filesystem::path& path);

/// Optimal curve of every positive-rank class with conductor dividing N.
/// IncompleteDataError if N exceeds the completeness bound, or if the
/// classes at some conductor dividing N disagree with the inventory.
std::vector<EllipticCurveRecord> positive_rank_factors(const CurveDataset& d, Int N);

/// XDQ_DATA (a directory or the curves.csv path), else the build-time data directory.
std::filesystem::path data_dir();
std::filesystem::path dataset_path();

const CurveDataset& default_dataset();
const CuratedFacts& default_facts();

/// "N : spec | k=v ..." pair syntax, also used by the CLI.
CuratedPair parse_pair(std::string_view line);

}  // namespace dataio
}  // namespace xdq
