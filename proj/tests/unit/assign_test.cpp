#include <doctest.h>

#include <algorithm>
#include <set>

#include "longeval/assign.hpp"
#include "longeval/error.hpp"

using namespace longeval;

TEST_CASE("n=10, f=0.5, M=3 gives three subsets of five") {
  const auto a = make_fine_assignments("s1", 10, 3, 0.5, 42);
  REQUIRE(a.size() == 3);
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(a[j].annotator_slot == j);
    CHECK(a[j].unit_indices.size() == 5);
    CHECK(std::is_sorted(a[j].unit_indices.begin(), a[j].unit_indices.end()));
    CHECK(std::set<std::size_t>(a[j].unit_indices.begin(), a[j].unit_indices.end()).size() == 5);
    CHECK_NOTHROW(a[j].validate(10));
  }
}

TEST_CASE("floor guard and full coverage") {
  CHECK(make_fine_assignments("s", 4, 1, 0.1, 0)[0].unit_indices.size() == 1);
  for (const auto& a : make_fine_assignments("s", 7, 3, 1.0, 9)) {
    CHECK(a.unit_indices == std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6});
  }
}

TEST_CASE("subset size law holds exhaustively") {
  // round(k*n/10) with halves up, in integer arithmetic.
  const double fractions[] = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  for (int k = 1; k <= 10; ++k) {
    for (std::size_t n = 1; n <= 60; ++n) {
      const std::size_t expected = std::max<std::size_t>(1, (k * n + 5) / 10);
      INFO("k=" << k << " n=" << n);
      CHECK(subset_size(n, fractions[k - 1]) == expected);
      const auto a = make_fine_assignments("s", n, 2, fractions[k - 1], n * 31 + k);
      CHECK(a[0].unit_indices.size() == expected);
      CHECK(a[1].unit_indices.size() == expected);
    }
  }
}

TEST_CASE("each slot's subset is determined by (seed, summary_id, slot) alone") {
  const auto three = make_fine_assignments("s1", 30, 3, 0.3, 5);
  const auto five = make_fine_assignments("s1", 30, 5, 0.3, 5);
  for (std::size_t j = 0; j < 3; ++j) CHECK(three[j].unit_indices == five[j].unit_indices);
  CHECK(make_fine_assignments("s1", 30, 3, 0.3, 5)[1].unit_indices == three[1].unit_indices);
  const auto other_summary = make_fine_assignments("s2", 30, 3, 0.3, 5);
  const auto other_seed = make_fine_assignments("s1", 30, 3, 0.3, 6);
  CHECK((other_summary[0].unit_indices != three[0].unit_indices || other_summary[1].unit_indices != three[1].unit_indices));
  CHECK((other_seed[0].unit_indices != three[0].unit_indices || other_seed[1].unit_indices != three[1].unit_indices));
}

TEST_CASE("slots draw different subsets") {
  std::size_t differing = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto a = make_fine_assignments("s", 20, 2, 0.5, seed);
    if (a[0].unit_indices != a[1].unit_indices) ++differing;
  }
  CHECK(differing >= 45);
}

TEST_CASE("invalid inputs") {
  CHECK_THROWS_AS(make_fine_assignments("s", 0, 3, 0.5, 0), ValidationError);
  CHECK_THROWS_AS(make_fine_assignments("s", 5, 0, 0.5, 0), ValidationError);
  CHECK_THROWS_AS(make_fine_assignments("s", 5, 3, 0.0, 0), ValidationError);
  CHECK_THROWS_AS(make_fine_assignments("s", 5, 3, 1.01, 0), ValidationError);
  CHECK_THROWS_AS(make_coarse_assignments("s", 0, ScaleSpec::likert_0_5(), 0), ValidationError);
}

TEST_CASE("coarse assignments carry the scale and no units") {
  const auto a = make_coarse_assignments("s1", 3, ScaleSpec::likert_0_5(), 1);
  REQUIRE(a.size() == 3);
  for (const auto& x : a) {
    CHECK(x.mode == Mode::Coarse);
    CHECK(x.unit_indices.empty());
    CHECK(x.scale == ScaleSpec::likert_0_5());
    CHECK_NOTHROW(x.validate(0));
  }
  CHECK(make_coarse_assignments("s1", 1, ScaleSpec::direct_assessment(), 1).size() == 1);
}

TEST_CASE("validate rejects broken invariants") {
  Assignment a{"s", 0, Mode::Fine, {0, 2, 1}, HintMode::None, 0, 1.0, std::nullopt};
  CHECK_THROWS_AS(a.validate(3), ValidationError);
  a.unit_indices = {0, 0};
  CHECK_THROWS_AS(a.validate(3), ValidationError);
  a.unit_indices = {0, 3};
  CHECK_THROWS_AS(a.validate(3), ValidationError);
  a.unit_indices = {};
  CHECK_THROWS_AS(a.validate(3), ValidationError);
  Assignment c{"s", 0, Mode::Coarse, {1}, HintMode::None, 0, 1.0, ScaleSpec{}};
  CHECK_THROWS_AS(c.validate(3), ValidationError);
}

TEST_CASE("assignment json round-trip") {
  const auto a = make_fine_assignments("s1", 10, 2, 0.5, 3, HintMode::Gold)[1];
  const Assignment b = nlohmann::json(a).get<Assignment>();
  CHECK(b.summary_id == a.summary_id);
  CHECK(b.annotator_slot == 1);
  CHECK(b.unit_indices == a.unit_indices);
  CHECK(b.hint_mode == HintMode::Gold);
  CHECK(b.fraction == 0.5);
  CHECK(b.seed == 3);
  const auto c = make_coarse_assignments("s1", 1, ScaleSpec::direct_assessment(), 0)[0];
  CHECK(nlohmann::json(c).get<Assignment>().scale == ScaleSpec::direct_assessment());
}

TEST_CASE("scale parsing") {
  CHECK(parse_scale("likert") == ScaleSpec{0, 5});
  CHECK(parse_scale("da") == ScaleSpec{1, 100});
  CHECK(parse_scale("1-7") == ScaleSpec{1, 7});
  CHECK_THROWS_AS(parse_scale("5-1"), ValidationError);
  CHECK_THROWS_AS(parse_scale("wide"), ValidationError);
}
