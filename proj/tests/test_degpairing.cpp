#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "xdq/dataio.hpp"
#include "xdq/degpairing.hpp"
#include "xdq/errors.hpp"

using namespace xdq;

namespace {

const CurveDataset& data() {
  static const CurveDataset d = dataio::load_dataset(std::string(XDQ_TEST_DATA_DIR) + "/curves.csv");
  return d;
}

const CuratedFacts& facts() {
  static const CuratedFacts f = dataio::load_curated_facts(std::string(XDQ_TEST_DATA_DIR) + "/curated_facts.txt");
  return f;
}

const EllipticCurveRecord& curve(const char* label) {
  const auto* e = data().find(label);
  REQUIRE(e);
  return *e;
}

EllipticCurveRecord fake(Int N, Int rank, Int degree) {
  EllipticCurveRecord e;
  e.label = std::to_string(N) + "a1";
  e.isogeny_class = std::to_string(N) + "a";
  e.conductor = N;
  e.rank = e.analytic_rank = rank;
  e.modular_degree = degree;
  return e;
}

}  // namespace

TEST_CASE("the four binary forms at levels 74, 86, 111, 159") {
  struct Row {
    Int N;
    const char* label;
    Gram want;
  };
  for (const auto& [N, label, want] : std::vector<Row>{{74, "37a1", {{6, -4}, {-4, 6}}},
                                                       {86, "43a1", {{6, -4}, {-4, 6}}},
                                                       {111, "37a1", {{8, -6}, {-6, 8}}},
                                                       {159, "53a1", {{8, -6}, {-6, 8}}}}) {
    INFO("N = ", N);
    const auto form = pairing::normalize_signs(pairing::gram_matrix(Newform(curve(label)), N));
    CHECK(form.divisor_basis == std::vector<Int>{1, N / curve(label).conductor});
    CHECK(form.gram == want);
    CHECK(qf::min_nonzero(form.gram) == 4);
    for (Int k = 2; k <= 8; ++k) CHECK_FALSE(qf::represents(pairing::scale_for_cover(form, k).gram, 4));
  }
}

TEST_CASE("Gram matrices: diagonal, symmetry, divisibility, definiteness") {
  int checked = 0, skipped = 0;
  for (const auto& e : data().curves) {
    if (!e.optimal() || e.conductor > 60) continue;
    const Newform f(e);
    for (Int k = 1; e.conductor * k <= 240; ++k) {
      const Int N = e.conductor * k;
      DegreeForm form;
      try {
        form = pairing::gram_matrix(f, N);
      } catch (const NotApplicable&) {
        CHECK_FALSE(nt::is_squarefree(k));
        CHECK(std::gcd(k, e.conductor) != 1);
        ++skipped;
        continue;
      }
      INFO(e.label, " N = ", N);
      CHECK(form.divisor_basis == nt::divisors(k));
      const Int diag = nt::psi_index(N) / nt::psi_index(e.conductor) * e.modular_degree;
      for (std::size_t i = 0; i < form.gram.size(); ++i) {
        CHECK(form.gram[i][i] == diag);
        for (std::size_t j = 0; j < form.gram.size(); ++j) {
          CHECK(form.gram[i][j] == form.gram[j][i]);
          CHECK(form.gram[i][j] % e.modular_degree == 0);
        }
      }
      if (form.gram.size() <= 8) CHECK(qf::is_positive_definite(form.gram));
      ++checked;
    }
  }
  CHECK(checked > 100);
  CHECK(skipped > 0);
}

TEST_CASE("scaling and sign normalisation") {
  const auto base = pairing::gram_matrix(Newform(curve("37a1")), 74);
  auto s = pairing::scale_for_isogeny(pairing::scale_for_cover(base, 3), 5);
  CHECK(s.gram == qf::scaled(base.gram, 15));
  CHECK(s.scale_log == std::vector<ScaleStep>{{"cover", 3}, {"isogeny", 5}});
  CHECK(s.total_scale() == 15);
  CHECK_THROWS_AS(pairing::scale_for_cover(base, 0), DomainError);
  CHECK_THROWS_AS(pairing::scale_for_isogeny(base, -1), DomainError);

  CHECK(pairing::normalize_signs(Gram{{6, 4}, {4, 6}}) == Gram{{6, -4}, {-4, 6}});
  // flipping basis vectors does not change the values
  const Gram g{{9, 2, -3}, {2, 7, 1}, {-3, 1, 8}};
  const Gram n = pairing::normalize_signs(g);
  for (std::size_t j = 1; j < n.size(); ++j) CHECK(n[0][j] <= 0);
  CHECK(qf::represented_values(g, 60).values == qf::represented_values(n, 60).values);
}

TEST_CASE("pairing entry errors") {
  const Newform f(curve("37a1"));
  CHECK_THROWS_AS(pairing::pairing_entry(f, 75, 1, 1), DomainError);
  CHECK_THROWS_AS(pairing::pairing_entry(f, 74, 1, 3), DomainError);
  CHECK_THROWS_AS(pairing::gram_matrix(f, 38), DomainError);
  // N/M = 4 shares the prime 2 with M = 14
  CHECK_THROWS_AS(pairing::gram_matrix(Newform(curve("14a1")), 56), NotApplicable);
}

TEST_CASE("strong Weil degree at the conductor-N pairs") {
  std::set<std::pair<Int, std::vector<Int>>> listed;
  for (const auto& p : facts().conductor_n_pairs) listed.insert({p.level(), p.delta.elements});
  std::set<Int> levels;
  for (const auto& p : facts().conductor_n_pairs) levels.insert(p.level());

  int exact4 = 0;
  for (Int N : levels) {
    const auto recs = facts().shimura_at(N);
    for (const auto& e : dataio::positive_rank_factors(data(), N)) {
      if (e.conductor != N) continue;
      for (const auto& d : units::subgroups_containing_minus_one(N)) {
        if (!units::is_intermediate(d)) continue;
        const auto w = pairing::strong_weil_degree_delta(e, d, recs);
        INFO(e.label, " ", units::format_delta(d));
        if (listed.count({N, d.elements})) {
          CHECK(e.modular_degree == 2);
          CHECK(units::index_in_units(d) == 2);
          REQUIRE(w.exact);
          CHECK(w.value() == 4);
          ++exact4;
        } else {
          CHECK_FALSE(w.compatible_with(4));
        }
      }
    }
  }
  // 55a has rank 0; (55, <-1,4>) is covered by the gonality table instead
  int elsewhere = 0;
  for (const auto& p : facts().conductor_n_pairs)
    if (dataio::positive_rank_factors(data(), p.level()).empty()) {
      CHECK(std::any_of(facts().gonality4_pairs.begin(), facts().gonality4_pairs.end(),
                        [&](const CuratedPair& g) { return g.delta == p.delta; }));
      ++elsewhere;
    }
  CHECK(elsewhere == 1);
  CHECK(exact4 + elsewhere == static_cast<int>(facts().conductor_n_pairs.size()));

  // 37a1 with Delta = <4>: 2 * 2
  const auto w = pairing::strong_weil_degree_delta(curve("37a1"), units::parse_delta(37, "4"), {});
  CHECK(w.exact);
  CHECK(w.value() == 4);
}

TEST_CASE("strong Weil degree at levels with only conductor-N factors") {
  for (Int N : facts().conductor_n_levels) {
    // 67 and 73 carry no positive rank curve at all
    const auto factors = dataio::positive_rank_factors(data(), N);
    CHECK(factors.empty() == (N == 67 || N == 73));
    for (const auto& e : factors) {
      INFO(e.label);
      CHECK(e.conductor == N);
      for (const auto& d : units::subgroups_containing_minus_one(N))
        if (units::is_intermediate(d))
          CHECK_FALSE(pairing::strong_weil_degree_delta(e, d, facts().shimura_at(N)).compatible_with(4));
    }
  }
}

TEST_CASE("strong Weil degree rules") {
  const auto pm = units::plus_minus_one(901);  // index 416
  const auto big = units::subgroup_from_generators(901, std::vector<Int>{2});

  // full group
  CHECK(pairing::strong_weil_degree_delta(fake(901, 0, 6), units::full_group(901), {}).value() == 6);

  // odd rank, small and large level
  CHECK(pairing::strong_weil_degree_delta(fake(43, 1, 2), units::plus_minus_one(43), {}).value() == 2 * 21);
  CHECK(pairing::strong_weil_degree_delta(fake(901, 1, 6), pm, {}).value() == 6 * 416 / 4);

  // even rank above 800: kernel order at most 16
  auto w = pairing::strong_weil_degree_delta(fake(901, 0, 6), pm, {});
  CHECK_FALSE(w.exact);
  CHECK(w.candidates == std::vector<Int>{156, 192, 208, 312, 416, 624, 832, 1248, 2496});
  CHECK(w.lower() == 156);
  CHECK(w.upper() == 2496);
  CHECK_THROWS_AS(w.value(), InvariantViolation);

  const std::vector<ShimuraRecord> three{{901, "", 3, "C3"}}, one{{901, "", 1, "C1"}};
  CHECK(pairing::strong_weil_degree_delta(fake(901, 0, 6), pm, three).value() == 832);
  CHECK(pairing::strong_weil_degree_delta(fake(901, 0, 6), pm, one).value() == 2496);
  w = pairing::strong_weil_degree_delta(fake(901, 0, 6), big, three);
  const Int top = 6 * units::index_in_units(big);
  CHECK(w.candidates == std::vector<Int>{top / 3, top});

  // even rank below 800 without a record
  CHECK(pairing::strong_weil_degree_delta(fake(389, 0, 40), units::plus_minus_one(389), {}).value() == 40 * 194);

  CHECK_THROWS_AS(pairing::strong_weil_degree_delta(curve("37a1"), units::plus_minus_one(74), {}), DomainError);
  auto not_opt = curve("37a1");
  not_opt.label = "37a2";
  CHECK_THROWS_AS(pairing::strong_weil_degree_delta(not_opt, units::plus_minus_one(37), {}), DomainError);
}

TEST_CASE("kernel hypothesis flag") {
  const auto& v = facts().verified_kernel_pairs;
  CHECK(pairing::hypothesis_flag_condM(74, curve("37a1"), v));
  CHECK(pairing::hypothesis_flag_condM(159, curve("53a1"), v));
  CHECK_FALSE(pairing::hypothesis_flag_condM(148, curve("37a1"), v));
}
