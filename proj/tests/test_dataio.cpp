#include <doctest.h>

#include <algorithm>
#include <set>

#include "xdq/dataio.hpp"
#include "xdq/errors.hpp"
#include "xdq/modcurve.hpp"

using namespace xdq;

namespace {

const std::string dir = XDQ_TEST_DATA_DIR;

const CurveDataset& data() {
  static const CurveDataset d = dataio::load_dataset(dir + "/curves.csv");
  return d;
}

const CuratedFacts& facts() {
  static const CuratedFacts f = dataio::load_curated_facts(dir + "/curated_facts.txt");
  return f;
}

const std::string small =
    "# completeness_bound: 11\n"
    "# class_counts: 11:1\n"
    "label,conductor,a1,a2,a3,a4,a6,rank,analytic_rank,modular_degree,isogeny_class,isogeny_degrees\n"
    "11a1,11,0,-1,1,-10,-20,0,0,1,11a,11a1:1;11a2:5;11a3:5\n"
    "11a3,11,0,-1,1,0,0,0,0,5,11a,11a1:5;11a2:25;11a3:1\n";

CurveDataset without(const std::string& label) {
  CurveDataset d = data();
  std::erase_if(d.curves, [&](const auto& e) { return e.label == label; });
  return d;
}

std::vector<std::string> labels(const std::vector<EllipticCurveRecord>& v) {
  std::vector<std::string> out;
  for (const auto& e : v) out.push_back(e.label);
  return out;
}

}  // namespace

TEST_CASE("parse a small file") {
  const auto d = dataio::parse_dataset(small);
  CHECK(d.completeness_bound == 11);
  CHECK(d.class_counts == std::map<Int, Int>{{11, 1}});
  REQUIRE(d.curves.size() == 2);
  const auto* e = d.find("11a3");
  REQUIRE(e);
  CHECK(e->modular_degree == 5);
  CHECK(e->isogeny_degree_to("11a2") == 25);
  CHECK(e->isogeny_degree_to("37a1") == 0);
  CHECK_FALSE(e->optimal());
  CHECK(d.find("11a1")->optimal());
  CHECK(d.isogeny_class("11a").size() == 2);
  CHECK(d.find("11a2") == nullptr);
}

TEST_CASE("round trip") {
  const auto d = dataio::parse_dataset(dataio::serialize_dataset(data()));
  CHECK(d.completeness_bound == data().completeness_bound);
  CHECK(d.class_counts == data().class_counts);
  CHECK(d.curves == data().curves);
  CHECK(dataio::parse_dataset(dataio::serialize_dataset(d)).curves == d.curves);

  const auto empty = dataio::parse_dataset("");
  CHECK(empty.curves.empty());
  CHECK(empty.completeness_bound == 0);
}

TEST_CASE("columns may come in any order") {
  std::string text =
      "isogeny_degrees,label,a1,a2,a3,a4,a6,conductor,rank,analytic_rank,modular_degree,isogeny_class\n"
      "37a1:1,37a1,0,0,1,-1,0,37,1,1,2,37a\n";
  const auto d = dataio::parse_dataset(text);
  REQUIRE(d.curves.size() == 1);
  CHECK(d.curves[0] == *data().find("37a1"));
}

TEST_CASE("malformed rows are rejected") {
  const std::string header =
      "label,conductor,a1,a2,a3,a4,a6,rank,analytic_rank,modular_degree,isogeny_class,isogeny_degrees\n";
  auto bad = [&](const std::string& row) { return dataio::parse_dataset(header + row); };
  CHECK_THROWS_AS(bad("37a1,37,0,0,1,-1,0,1,1,2,37a\n"), DataFormatError);                   // short row
  CHECK_THROWS_AS(bad("37a1,37,0,0,1,-1,x,1,1,2,37a,37a1:1\n"), DataFormatError);             // not a number
  CHECK_THROWS_AS(bad("37a1,37,0,0,0,0,0,1,1,2,37a,37a1:1\n"), DataFormatError);              // singular
  CHECK_THROWS_AS(bad("37a1,37,0,0,1,-1,0,1,1,0,37a,37a1:1\n"), DataFormatError);             // degree 0
  CHECK_THROWS_AS(bad("37a1,38,0,0,1,-1,0,1,1,2,37a,37a1:1\n"), DataFormatError);             // conductor
  CHECK_THROWS_AS(bad("37a1,37,0,0,1,-625,0,1,1,2,37a,37a1:1\n"), DataFormatError);           // bad disc
  // 11a1 scaled by u = 5: same curve, non-minimal at 5
  CHECK_THROWS_AS(bad("11a1,11,0,-25,125,-6250,-312500,0,0,1,11a,11a1:1\n"), DataFormatError);
  CHECK_THROWS_AS(bad("37a1,37,0,0,1,-1,0,1,1,2,37a,37a1:1\n37a1,37,0,0,1,-1,0,1,1,2,37a,37a1:1\n"),
                  DataFormatError);
  CHECK_THROWS_AS(dataio::parse_dataset("label,conductor\n37a1,37\n"), DataFormatError);  // missing columns
  CHECK_THROWS_AS(dataio::parse_dataset(header.substr(0, header.size() - 1) + ",colour\n"), DataFormatError);
  try {
    bad("37a1,37,0,0,1,-1,0,1,1,2,37a,37a1:1\n37a1,37,0,0,1,-1,0,1,1,2,37a,37a1:1\n");
  } catch (const DataFormatError& e) {
    CHECK(std::string(e.what()).find(":3") != std::string::npos);
  }
  CHECK(dataio::record_problem(*data().find("37a1")).empty());
}

TEST_CASE("every bundled curve is valid and the inventory is consistent") {
  std::map<Int, std::set<std::string>> classes;
  for (const auto& e : data().curves) {
    CHECK(dataio::record_problem(e).empty());
    CHECK(e.conductor <= data().completeness_bound);
    classes[e.conductor].insert(e.isogeny_class);
    CHECK(data().find(e.isogeny_class + "1"));
    CHECK(e.isogeny_degree_to(e.label) == 1);
  }
  std::map<Int, Int> counts;
  for (const auto& [n, s] : classes) counts[n] = static_cast<Int>(s.size());
  CHECK(counts == data().class_counts);
  CHECK(data().completeness_bound >= 159);
  const auto* e = data().find("37a1");
  REQUIRE(e);
  CHECK(e->conductor == 37);
  CHECK(e->rank == 1);
  CHECK(e->modular_degree == 2);
}

TEST_CASE("positive rank factors") {
  CHECK(labels(dataio::positive_rank_factors(data(), 74)) == std::vector<std::string>{"37a1"});
  CHECK(labels(dataio::positive_rank_factors(data(), 86)) == std::vector<std::string>{"43a1"});
  CHECK(labels(dataio::positive_rank_factors(data(), 111)) == std::vector<std::string>{"37a1"});
  CHECK(labels(dataio::positive_rank_factors(data(), 159)) == std::vector<std::string>{"53a1"});
  CHECK(dataio::positive_rank_factors(data(), 48).empty());
  for (Int N : facts().rank0_levels) CHECK(dataio::positive_rank_factors(data(), N).empty());

  CHECK_THROWS_AS(dataio::positive_rank_factors(data(), data().completeness_bound + 1), IncompleteDataError);
  CHECK_THROWS_AS(dataio::positive_rank_factors(without("37a1"), 74), IncompleteDataError);
  CHECK_THROWS_AS(dataio::positive_rank_factors(without("37a1"), 37), IncompleteDataError);
  CHECK_NOTHROW(dataio::positive_rank_factors(without("37a1"), 43));
}

TEST_CASE("curated facts") {
  const auto& f = facts();
  CHECK(f.shimura_table.size() == 48);
  CHECK(f.shimura_at(11) == std::vector<ShimuraRecord>{{11, "", 5, "C5"}});
  CHECK(f.shimura_at(37).front().group_order == 3);
  CHECK(f.shimura_at(80).size() == 2);
  CHECK(f.shimura_at(74).empty());
  CHECK(f.verified_kernel_pairs.size() == 4);
  CHECK(f.gonality_gt4.min_genus == 8);
  CHECK_FALSE(f.gonality_gt4.source.empty());
  CHECK(f.gonality_gt4.date == "2024");
  CHECK(f.main_theorem_blanket_levels.size() == 15);

  // every listed subgroup parses to the stated size at the stated level
  for (const auto* list : {&f.hyperelliptic_pairs, &f.gonality4_pairs, &f.special_infinite_pairs,
                           &f.conductor_n_pairs, &f.main_theorem_pairs, &f.cubic_table_pairs})
    for (const auto& p : *list) {
      CHECK(units::is_subgroup(p.delta));
      CHECK(units::is_intermediate(p.delta));
      if (p.attr_int("size") > 0) CHECK(static_cast<Int>(p.delta.size()) == p.attr_int("size"));
    }

  // levels with no intermediate subgroup really have none
  for (Int N : f.no_intermediate_levels)
    if (N >= 3)
      for (const auto& d : units::subgroups_containing_minus_one(N)) CHECK_FALSE(units::is_intermediate(d));
}

TEST_CASE("curated facts syntax") {
  const auto f = dataio::parse_curated_facts(
      "[quartic_x0_levels]\n1-3, 7 # trailing\n[hyperelliptic_pairs]\n21 : 8 | size=4 genus=3\n");
  CHECK(f.quartic_x0_levels == std::set<Int>{1, 2, 3, 7});
  REQUIRE(f.hyperelliptic_pairs.size() == 1);
  CHECK(f.hyperelliptic_pairs[0].attr_int("genus") == 3);
  CHECK(f.hyperelliptic_pairs[0].attr_int("missing", 9) == 9);
  CHECK_THROWS_AS(dataio::parse_curated_facts("[no_such_section]\n1\n"), DataFormatError);
  CHECK_THROWS_AS(dataio::parse_curated_facts("[hyperelliptic_pairs]\n21 : 8 | size=6\n"), DataFormatError);
  CHECK_THROWS_AS(dataio::parse_pair("21 8"), DomainError);
}

TEST_CASE("ap table") {
  const auto t = dataio::load_ap_table(dir + "/ap_table.csv");
  REQUIRE(t.count("37a1"));
  CHECK(t.at("37a1").front() == std::pair<Int, Int>{2, -2});
  CHECK_THROWS(dataio::load_ap_table(dir + "/does_not_exist.csv"));
}
