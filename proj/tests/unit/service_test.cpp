#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>

#include "longeval/error.hpp"
#include "longeval/service.hpp"
#include "temp_dir.hpp"

using namespace longeval;
using longeval::testing::TempDir;
using nlohmann::json;

namespace {

const char* kNumbers[] = {"one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten"};

// Ten four-word sentences, hence ten units.
std::string ten_unit_summary() {
  std::string text;
  for (const char* n : kNumbers) text += std::string("Claim ") + n + " is here. ";
  return text;
}

json fine_project(const std::string& id, double fraction = 1.0) {
  json body{{"project_id", id},
            {"mode", "fine"},
            {"documents", {{{"doc_id", "d1"}, {"text", "Claim one is here. Claim two is here. Other facts follow."}}}},
            {"summaries",
             {{{"summary_id", "s1"}, {"doc_id", "d1"}, {"system_id", "bart"}, {"text", ten_unit_summary()}},
              {{"summary_id", "s2"}, {"doc_id", "d1"}, {"system_id", "led"}, {"text", "Claim two is here."}}}}};
  std::string jsonl;
  for (const auto& s : {std::make_pair("s1", 10u), std::make_pair("s2", 1u)}) {
    for (const auto& a : make_fine_assignments(s.first, s.second, 2, fraction, 7, HintMode::Algorithmic)) {
      jsonl += json(a).dump() + "\n";
    }
  }
  body["assignments_jsonl"] = jsonl;
  body["hints"] = {json(HintSet{"s1", 0, {1, 0}, {0.9, 0.2}, "bm25", 0.0})};
  return body;
}

json coarse_project(const std::string& id) {
  json body{{"project_id", id},
            {"mode", "coarse"},
            {"scale", ScaleSpec::likert_0_5()},
            {"documents", {{{"doc_id", "d1"}, {"text", "A source."}}}},
            {"summaries", {{{"summary_id", "s1"}, {"doc_id", "d1"}, {"system_id", "x"}, {"text", "A summary."}}}}};
  body["assignments"] = make_coarse_assignments("s1", 2, ScaleSpec::likert_0_5(), 0);
  return body;
}

json fine_payload(const std::string& summary, std::size_t unit, std::size_t slot, int label) {
  return {{"summary_id", summary}, {"unit_index", unit}, {"annotator_slot", slot}, {"label", label}, {"elapsed_ms", 1500}};
}

}  // namespace

TEST_CASE("next_task walks units in order and is idempotent") {
  TempDir dir;
  AnnotationService svc(dir.path());
  const auto created = svc.create_project(fine_project("p1"));
  CHECK(created.at("slots") == json::array({0, 1}));

  const auto first = svc.next_task("p1", 0);
  REQUIRE(first);
  CHECK(first->at("summary_id") == "s1");
  CHECK(first->at("active_unit").at("unit_index") == 0);
  CHECK(first->at("active_unit").at("text") == "Claim one is here.");
  CHECK(first->at("position") == json{{"index", 1}, {"total", 10}});
  CHECK(first->at("hint_mode") == "algorithmic");
  REQUIRE(first->at("hints").size() == 2);
  CHECK(first->at("hints")[0].at("sentence_index") == 1);
  CHECK(first->at("hints")[0].at("start") == 19);
  CHECK(svc.next_task("p1", 0) == first);

  svc.submit_judgment("p1", fine_payload("s1", 0, 0, 1));
  CHECK(svc.next_task("p1", 0)->at("active_unit").at("unit_index") == 1);
  CHECK_THROWS_AS(svc.next_task("p1", 5), NotFoundError);
  CHECK_THROWS_AS(svc.next_task("nope", 0), NotFoundError);
}

TEST_CASE("submit_judgment: ack, duplicates, validation, assignment enforcement") {
  TempDir dir;
  AnnotationService svc(dir.path());
  svc.create_project(fine_project("p2", 0.5));
  const json assigned = svc.next_task("p2", 0)->at("assignment").at("unit_indices");
  const std::size_t unit = assigned[0].get<std::size_t>();
  std::size_t off = 0;
  while (std::find(assigned.begin(), assigned.end(), json(off)) != assigned.end()) ++off;

  const auto ack = svc.submit_judgment("p2", fine_payload("s1", unit, 0, 1));
  CHECK(ack.at("seq") == 1);
  CHECK(ack.at("status") == "ok");
  CHECK(svc.export_judgments("p2").size() == 1);
  CHECK_THROWS_AS(svc.submit_judgment("p2", fine_payload("s1", unit, 0, 0)), DuplicateError);
  CHECK_THROWS_AS(svc.submit_judgment("p2", fine_payload("s1", off, 0, 1)), UnassignedError);
  CHECK_THROWS_AS(svc.submit_judgment("p2", fine_payload("s1", unit, 1, 2)), ValidationError);
  CHECK_THROWS_AS(svc.submit_judgment("p2", fine_payload("s1", unit, 9, 1)), UnassignedError);
  CHECK_THROWS_AS(svc.submit_judgment("p2", json{{"summary_id", "s1"}}), ValidationError);

  auto correction = fine_payload("s1", unit, 0, 0);
  correction["supersedes"] = 1;
  CHECK(svc.submit_judgment("p2", correction).at("seq") == 2);
  const auto records = svc.export_judgments("p2");
  REQUIRE(records.size() == 2);
  const auto& stored = std::get<FineJudgment>(records[1].judgment);
  CHECK(stored.hint_mode == HintMode::Algorithmic);
  CHECK(stored.elapsed_ms == 1500);
  CHECK_FALSE(stored.submitted_at.empty());
}

TEST_CASE("progress counts judged units per slot") {
  TempDir dir;
  AnnotationService svc(dir.path());
  svc.create_project(fine_project("p3"));
  auto p = svc.progress("p3");
  CHECK(p.at("judged") == 0);
  CHECK(p.at("slots")[0].at("total") == 11);
  for (std::size_t u = 0; u < 5; ++u) svc.submit_judgment("p3", fine_payload("s1", u, 0, 1));
  p = svc.progress("p3");
  CHECK(p.at("slots")[0].at("judged") == 5);
  CHECK(p.at("slots")[0].at("median_elapsed_ms") == 1500.0);
  for (std::size_t u = 5; u < 10; ++u) svc.submit_judgment("p3", fine_payload("s1", u, 0, 1));
  svc.submit_judgment("p3", fine_payload("s2", 0, 0, 0));
  p = svc.progress("p3");
  CHECK(p.at("slots")[0].at("judged") == 11);
  CHECK(p.at("slots")[0].at("total") == 11);
  CHECK_FALSE(svc.next_task("p3", 0).has_value());
  CHECK(svc.next_task("p3", 1).has_value());
}

TEST_CASE("coarse tasks carry the scale; ratings are range checked") {
  TempDir dir;
  AnnotationService svc(dir.path());
  svc.create_project(coarse_project("c1"));
  const auto task = svc.next_task("c1", 1);
  REQUIRE(task);
  CHECK(task->at("scale") == json{{"min", 0.0}, {"max", 5.0}});
  CHECK_FALSE(task->contains("active_unit"));
  CHECK_THROWS_AS(svc.submit_judgment("c1", {{"summary_id", "s1"}, {"annotator_slot", 1}, {"rating", 6}}),
                  ValidationError);
  svc.submit_judgment("c1", {{"summary_id", "s1"}, {"annotator_slot", 1}, {"rating", 4}, {"comment", "ok"},
                             {"elapsed_ms", 9000}});
  CHECK_FALSE(svc.next_task("c1", 1).has_value());
  const auto c = std::get<CoarseJudgment>(svc.export_judgments("c1")[0].judgment);
  CHECK(c.comment == "ok");
  CHECK(c.rating == 4);
  CHECK_THROWS_AS(svc.submit_judgment("c1", fine_payload("s1", 0, 0, 1)), ValidationError);
}

TEST_CASE("project creation validates and survives restart") {
  TempDir dir;
  {
    AnnotationService svc(dir.path());
    svc.create_project(fine_project("keep"));
    svc.submit_judgment("keep", fine_payload("s1", 0, 1, 1));
    CHECK_THROWS_AS(svc.create_project(fine_project("keep")), DuplicateError);
    CHECK_THROWS_AS(svc.create_project(fine_project("bad/id")), ValidationError);
    auto dangling = fine_project("dangling");
    dangling["summaries"][1]["doc_id"] = "d9";
    CHECK_THROWS_AS(svc.create_project(dangling), ReferenceError);
    CHECK_FALSE(std::filesystem::exists(dir.path() / "projects" / "dangling"));
    auto unknown = fine_project("unknown");
    unknown["assignments_jsonl"] = json(make_coarse_assignments("zz", 1, {}, 0)[0]).dump();
    CHECK_THROWS(svc.create_project(unknown));
  }
  AnnotationService again(dir.path());
  CHECK(again.project_ids() == std::vector<std::string>{"keep"});
  CHECK(again.export_judgments("keep").size() == 1);
  CHECK_THROWS_AS(again.submit_judgment("keep", fine_payload("s1", 0, 1, 0)), DuplicateError);
  CHECK(again.project_info("keep").at("mode") == "fine");
}

TEST_CASE("HTTP API") {
  TempDir dir;
  AnnotationService svc(dir.path());
  HttpFrontend http(svc);
  const int port = http.bind_any_port();
  REQUIRE(port > 0);
  std::thread server([&] { http.listen(); });
  httplib::Client client("127.0.0.1", port);
  for (int i = 0; i < 100 && !client.Get("/healthz"); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(10));

  auto res = client.Post("/projects", fine_project("web").dump(), "application/json");
  REQUIRE(res);
  CHECK(res->status == 201);
  res = client.Post("/projects", fine_project("web").dump(), "application/json");
  CHECK(res->status == 409);
  res = client.Post("/projects", "{oops", "application/json");
  CHECK(res->status == 422);

  res = client.Get("/projects/web/tasks/next?slot=0");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(json::parse(res->body).at("active_unit").at("unit_index") == 0);
  CHECK(client.Get("/projects/web/tasks/next?slot=x")->status == 422);
  CHECK(client.Get("/projects/missing/tasks/next?slot=0")->status == 404);

  res = client.Post("/projects/web/judgments", fine_payload("s1", 0, 0, 1).dump(), "application/json");
  CHECK(res->status == 201);
  CHECK(json::parse(res->body).at("seq") == 1);
  res = client.Post("/projects/web/judgments", fine_payload("s1", 0, 0, 1).dump(), "application/json");
  CHECK(res->status == 409);
  res = client.Post("/projects/web/judgments", fine_payload("s1", 0, 0, 7).dump(), "application/json");
  CHECK(res->status == 422);

  res = client.Get("/projects/web/progress");
  CHECK(json::parse(res->body).at("judged") == 1);
  res = client.Get("/projects/web/export");
  CHECK(res->status == 200);
  CHECK(json::parse(res->body).at("label") == 1);
  CHECK(json::parse(client.Get("/projects")->body).at("projects") == json::array({"web"}));
  CHECK(json::parse(client.Get("/projects/web")->body).at("slots") == json::array({0, 1}));

  http.stop();
  server.join();
}

TEST_CASE("default instructions mention the scale") {
  CHECK(default_instructions(Mode::Coarse).find("0 to 5") != std::string::npos);
  CHECK(default_instructions(Mode::Coarse, ScaleSpec::direct_assessment()).find("1 to 100") != std::string::npos);
  CHECK(default_instructions(Mode::Fine).find("Next Hint") != std::string::npos);
}
