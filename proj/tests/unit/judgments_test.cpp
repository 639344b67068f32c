#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <sstream>
#include <vector>

#include "longeval/corpus.hpp"
#include "longeval/error.hpp"
#include "longeval/judgments.hpp"
#include "longeval/rng.hpp"

using namespace longeval;

namespace {

FineJudgment fine(const std::string& s, std::size_t unit, std::size_t slot, int label) {
  FineJudgment f;
  f.summary_id = s;
  f.unit_index = unit;
  f.annotator_slot = slot;
  f.label = label;
  f.elapsed_ms = 1000;
  return f;
}

CoarseJudgment coarse(const std::string& s, std::size_t slot, double rating, ScaleSpec scale = {}) {
  CoarseJudgment c;
  c.summary_id = s;
  c.annotator_slot = slot;
  c.rating = rating;
  c.scale = scale;
  return c;
}

}  // namespace

TEST_CASE("fine summary score is 100 x mean label") {
  CHECK(summary_score_fine(std::vector<int>{1, 1, 0, 1}) == 75.0);
  CHECK(summary_score_fine(std::vector<int>{0, 0}) == 0.0);
  CHECK(summary_score_fine(std::vector<int>(12, 1)) == 100.0);
  CHECK_THROWS_AS(summary_score_fine(std::vector<int>{}), ValidationError);
  const std::vector<FineJudgment> js = {fine("s", 0, 0, 1), fine("s", 1, 0, 0)};
  CHECK(summary_score_fine(js) == 50.0);
}

TEST_CASE("fine score is invariant to unit order") {
  auto rng = derive_stream(1, 0);
  for (int t = 0; t < 200; ++t) {
    std::vector<int> labels(1 + rng.below(30));
    for (int& l : labels) l = static_cast<int>(rng.below(2));
    const double before = summary_score_fine(labels);
    for (std::size_t i = labels.size(); i > 1; --i) std::swap(labels[i - 1], labels[rng.below(i)]);
    CHECK(summary_score_fine(labels) == before);
    CHECK(before >= 0.0);
    CHECK(before <= 100.0);
  }
}

TEST_CASE("coarse score maps the scale linearly onto 0-100") {
  CHECK(summary_score_coarse(3, ScaleSpec::likert_0_5()) == 60.0);
  CHECK(summary_score_coarse(0, ScaleSpec::likert_0_5()) == 0.0);
  CHECK(summary_score_coarse(5, ScaleSpec::likert_0_5()) == 100.0);
  CHECK(summary_score_coarse(100, ScaleSpec::direct_assessment()) == 100.0);
  CHECK(summary_score_coarse(1, ScaleSpec::direct_assessment()) == 0.0);
  CHECK_THROWS_AS(summary_score_coarse(6, ScaleSpec::likert_0_5()), ValidationError);
  CHECK_THROWS_AS(summary_score_coarse(coarse("s", 0, 0, ScaleSpec::direct_assessment())), ValidationError);
}

TEST_CASE("validate rejects out-of-domain judgments") {
  CHECK_THROWS_AS(validate(fine("s", 0, 0, 2)), ValidationError);
  auto f = fine("s", 0, 0, 1);
  f.elapsed_ms = -1;
  CHECK_THROWS_AS(validate(f), ValidationError);
  CHECK_THROWS_AS(validate(coarse("s", 0, 5.5)), ValidationError);
  CHECK_NOTHROW(validate(coarse("s", 0, 4.5)));
}

TEST_CASE("build_matrix: 120 summaries x 3 slots") {
  std::vector<Judgment> js;
  for (int s = 0; s < 120; ++s) {
    for (std::size_t slot = 0; slot < 3; ++slot) {
      for (std::size_t u = 0; u < 4; ++u) js.push_back(fine("s" + std::to_string(1000 + s), u, slot, (u + slot + s) % 2));
    }
  }
  const auto m = build_matrix(js, Mode::Fine);
  CHECK(m.values.rows() == 120);
  CHECK(m.values.cols() == 3);
  CHECK(std::is_sorted(m.summary_ids.begin(), m.summary_ids.end()));
  CHECK(m.values(0, 0) == 50.0);
}

TEST_CASE("build_matrix: ragged data names the summary, empty selection errors") {
  std::vector<Judgment> js;
  for (std::size_t slot = 0; slot < 3; ++slot) js.push_back(coarse("a", slot, 4));
  for (std::size_t slot = 0; slot < 2; ++slot) js.push_back(coarse("b", slot, 4));
  try {
    build_matrix(js, Mode::Coarse);
    FAIL("expected MissingDataError");
  } catch (const MissingDataError& e) {
    CHECK(e.ids() == std::vector<std::string>{"b"});
  }
  MatrixOptions none;
  none.include = [](const std::string&) { return false; };
  try {
    build_matrix(js, Mode::Coarse, none);
    FAIL("expected empty matrix error");
  } catch (const MissingDataError&) {
    FAIL("wrong error type");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).starts_with("empty matrix"));
  }
  MatrixOptions only_a;
  only_a.include = [](const std::string& id) { return id == "a"; };
  const auto m = build_matrix(js, Mode::Coarse, only_a);
  CHECK(m.values == Matrix{{80, 80, 80}});
  CHECK(m.provenance == Mode::Coarse);
}

TEST_CASE("build_matrix with a corpus filter by system") {
  Corpus corpus({{"d", "Text.", {}}}, {{"a1", "d", "A", "x"}, {"b1", "d", "B", "y"}});
  std::vector<Judgment> js;
  for (std::size_t slot = 0; slot < 2; ++slot) {
    js.push_back(coarse("a1", slot, 5));
    js.push_back(coarse("b1", slot, 0));
  }
  CHECK(build_matrix(corpus, js, Mode::Coarse, "A").values == Matrix{{100, 100}});
  CHECK(build_matrix(corpus, js, Mode::Coarse).values.rows() == 2);
}

TEST_CASE("system_score examples") {
  AnnotationMatrix m{{"s1", "s2"}, Matrix{{100, 100, 100}, {0, 0, 0}}, Mode::Fine, 1.0};
  CHECK(system_score(m, {{"s1", "x"}, {"s2", "x"}}).at("x") == 50.0);
  AnnotationMatrix one{{"s"}, Matrix{{40, 60, 80}}, Mode::Fine, 1.0};
  CHECK(system_score(one, {{"s", "x"}}).at("x") == 60.0);

  AnnotationMatrix two{{"a", "b", "c", "d"}, Matrix{{10, 20}, {90, 70}, {30, 30}, {50, 60}}, Mode::Fine, 1.0};
  const std::map<std::string, std::string> sys{{"a", "x"}, {"b", "y"}, {"c", "x"}, {"d", "y"}};
  const auto scores = system_score(two, sys);
  CHECK(scores.at("x") == doctest::Approx(22.5));
  CHECK(scores.at("y") == doctest::Approx(67.5));
  AnnotationMatrix permuted{{"d", "c", "b", "a"}, Matrix{{50, 60}, {30, 30}, {90, 70}, {10, 20}}, Mode::Fine, 1.0};
  CHECK(system_score(permuted, sys) == scores);

  AnnotationMatrix constant{{"a", "b"}, Matrix{{42, 42}, {42, 42}}, Mode::Fine, 1.0};
  CHECK(system_score(constant, {{"a", "x"}, {"b", "x"}}).at("x") == 42.0);
  CHECK_THROWS(system_score(constant, {{"a", "x"}}));
}

TEST_CASE("effective_judgments applies corrections and rejects silent duplicates") {
  std::vector<JudgmentRecord> log = {{1, std::nullopt, fine("s", 0, 0, 1)}, {2, std::nullopt, fine("s", 1, 0, 1)},
                                     {3, 1, fine("s", 0, 0, 0)}};
  const auto eff = effective_judgments(log);
  REQUIRE(eff.size() == 2);
  CHECK(std::get<FineJudgment>(eff[0]).label == 0);
  log.push_back({4, std::nullopt, fine("s", 1, 0, 0)});
  CHECK_THROWS_AS(effective_judgments(log), DuplicateError);
}

TEST_CASE("judgment log json round-trip") {
  auto c = coarse("s", 1, 4);
  c.comment = "missing the ending";
  c.elapsed_ms = 5000;
  std::ostringstream out;
  out << nlohmann::json(JudgmentRecord{1, std::nullopt, fine("s", 2, 0, 1)}).dump() << "\n";
  out << nlohmann::json(JudgmentRecord{2, std::nullopt, c}).dump() << "\n";
  out << R"({"type":"fine","summary_id":"t","unit_index":0,"annotator_slot":0,"label":0})" << "\n";
  std::istringstream in(out.str());
  const auto records = read_judgments(in, "mem");
  REQUIRE(records.size() == 3);
  CHECK(records[2].seq == 3);
  const auto& back = std::get<CoarseJudgment>(records[1].judgment);
  CHECK(back.comment == "missing the ending");
  CHECK(back.rating == 4);
  CHECK(back.elapsed_ms == 5000);
  CHECK(std::get<FineJudgment>(records[0].judgment).unit_index == 2);

  std::istringstream bad(R"({"type":"fine","summary_id":"t","unit_index":0,"annotator_slot":0,"label":3})" "\n");
  CHECK_THROWS_AS(read_judgments(bad, "mem"), ParseError);
}

TEST_CASE("matrix csv round-trip and range check") {
  AnnotationMatrix m{{"a", "b"}, Matrix{{12.5, 100}, {0, 33.25}}, Mode::Fine, 1.0};
  std::ostringstream out;
  write_matrix_csv(out, m);
  CHECK(out.str().rfind("summary_id,slot_0,slot_1\n", 0) == 0);
  std::istringstream in(out.str());
  const auto back = read_matrix_csv(in, "mem");
  CHECK(back.summary_ids == m.summary_ids);
  CHECK(back.values == m.values);
  std::istringstream bad("summary_id,slot_0\na,101\n");
  CHECK_THROWS_AS(read_matrix_csv(bad, "mem"), ParseError);
}

TEST_CASE("utc_timestamp format") {
  const auto t = utc_timestamp();
  CHECK(t.size() == 24);
  CHECK(t[10] == 'T');
  CHECK(t.back() == 'Z');
}
