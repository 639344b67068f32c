#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "longeval/error.hpp"
#include "longeval/rng.hpp"
#include "longeval/stats/timing.hpp"

using namespace longeval;
using namespace longeval::stats;

namespace {

FineJudgment judged(const std::string& s, std::size_t unit, std::size_t slot, int label, std::int64_t ms,
                    HintMode mode = HintMode::None) {
  return {s, unit, slot, label, ms, mode, ""};
}

}  // namespace

TEST_CASE("all-correct judgments score accuracy 1") {
  GoldLabels gold{{{"s", 0}, true}, {{"s", 1}, false}};
  const std::vector<FineJudgment> js{judged("s", 0, 0, 0, 1000), judged("s", 1, 0, 1, 2000), judged("s", 0, 1, 0, 3000),
                                     judged("s", 1, 1, 1, 4000)};
  const auto r = perturbation_report(js, gold);
  CHECK(r.accuracy == 1.0);
  CHECK(r.fleiss_kappa.has_value());
  CHECK(*r.fleiss_kappa == 1.0);
  CHECK(r.median_time_all_ms == 2500);
}

TEST_CASE("coin-flip judgments on balanced gold score about one half") {
  auto rng = derive_stream(99, 0);
  GoldLabels gold;
  std::vector<FineJudgment> js;
  for (std::size_t u = 0; u < 10000; ++u) {
    gold[{"s", u}] = (u % 2) == 0;
    js.push_back(judged("s", u, 0, static_cast<int>(rng.below(2)), 1000));
  }
  CHECK(std::abs(perturbation_report(js, gold).accuracy - 0.5) <= 0.02);
}

TEST_CASE("median time and the break cap") {
  GoldLabels gold{{{"s", 0}, false}, {{"s", 1}, false}, {{"s", 2}, false}, {{"s", 3}, false}};
  std::vector<FineJudgment> js{judged("s", 0, 0, 1, 10000), judged("s", 1, 0, 1, 20000), judged("s", 2, 0, 1, 400000)};
  CHECK(perturbation_report(js, gold).median_time_all_ms == 20000);
  js.push_back(judged("s", 3, 0, 1, 700000));
  const auto r = perturbation_report(js, gold);
  CHECK(r.timing_excluded == 1);
  CHECK(r.median_time_all_ms == 20000);
  TimingOptions tight;
  tight.cap_ms = 15000;
  CHECK(perturbation_report(js, gold, tight).median_time_all_ms == 10000);
}

TEST_CASE("first-units median uses each slot's first five units per summary") {
  GoldLabels gold;
  std::vector<FineJudgment> js;
  for (std::size_t u = 0; u < 10; ++u) {
    gold[{"s", u}] = false;
    js.push_back(judged("s", u, 0, 1, u < 5 ? 60000 : 10000));
  }
  const auto r = perturbation_report(js, gold);
  CHECK(r.median_time_first_ms == 60000);
  CHECK(r.median_time_all_ms == 35000);
}

TEST_CASE("missing gold labels are reported") {
  GoldLabels gold{{{"s", 0}, false}};
  const std::vector<FineJudgment> js{judged("s", 0, 0, 1, 1), judged("s", 7, 0, 1, 1)};
  try {
    perturbation_report(js, gold);
    FAIL("expected MissingDataError");
  } catch (const MissingDataError& e) {
    CHECK(e.ids().size() == 1);
  }
}

TEST_CASE("gold label file parsing") {
  std::istringstream in(R"({"summary_id":"s","unit_index":0,"perturbed":true})" "\n"
                        R"({"summary_id":"s","unit_index":1,"perturbed":false})" "\n");
  const auto gold = read_gold_labels(in, "mem");
  CHECK(gold.at({"s", 0}));
  CHECK_FALSE(gold.at({"s", 1}));
  std::istringstream bad(R"({"summary_id":"s","unit_index":0,"perturbed":"yes"})" "\n");
  CHECK_THROWS_AS(read_gold_labels(bad, "mem"), ParseError);
}

TEST_CASE("learning curve: flat, decreasing, empty") {
  std::vector<FineJudgment> flat;
  for (std::size_t u = 0; u < 20; ++u) flat.push_back(judged("s", u, 0, 1, 30000));
  const auto rows = learning_curve(flat);
  REQUIRE(rows.size() == 10);
  for (const auto& r : rows) {
    CHECK(r.mean_elapsed_ms == 30000);
    CHECK(r.count == 2);
  }

  std::vector<FineJudgment> decaying;
  for (std::size_t s = 0; s < 3; ++s) {
    for (std::size_t u = 0; u < 30; ++u) {
      const auto ms = static_cast<std::int64_t>(120000 - 90000.0 * u / 29.0);
      decaying.push_back(judged("s" + std::to_string(s), u, s % 2, 1, ms, HintMode::Algorithmic));
    }
  }
  const auto curve = learning_curve(decaying);
  REQUIRE(curve.size() == 10);
  for (std::size_t b = 1; b < curve.size(); ++b) {
    CHECK(curve[b].bucket == b);
    CHECK(curve[b].hint_mode == HintMode::Algorithmic);
    CHECK(curve[b].mean_elapsed_ms < curve[b - 1].mean_elapsed_ms);
  }
  CHECK(learning_curve({}).empty());
}

TEST_CASE("learning curve groups by hint mode") {
  std::vector<FineJudgment> js{judged("a", 0, 0, 1, 1000, HintMode::None), judged("b", 0, 0, 1, 3000, HintMode::Gold)};
  const auto rows = learning_curve(js);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].hint_mode == HintMode::None);
  CHECK(rows[1].hint_mode == HintMode::Gold);
}
