#include <doctest.h>

#include <sstream>
#include <string>

#include "longeval/corpus.hpp"
#include "longeval/error.hpp"
#include "temp_dir.hpp"

using namespace longeval;
using longeval::testing::TempDir;

namespace {

const char* kDocs =
    R"({"doc_id":"d1","text":"The trial enrolled 40 patients. Dr. Lee led it. Results were mixed."})"
    "\n"
    R"({"doc_id":"d2","text":"Rain fell all week.\nThe river rose."})"
    "\n";

std::string summaries_for(const std::string& missing_doc = "") {
  std::string out;
  for (const char* sys : {"bart", "led", "human"}) {
    for (const char* doc : {"d1", "d2"}) {
      const std::string d = missing_doc.empty() ? doc : missing_doc;
      out += std::string(R"({"summary_id":")") + sys + "-" + doc + R"(","doc_id":")" + d + R"(","system_id":")" + sys +
             R"(","text":"A short summary."})" + "\n";
    }
  }
  return out;
}

}  // namespace

TEST_CASE("two documents and six summaries group into three systems") {
  TempDir dir;
  const Corpus c = ingest_corpus(dir.write("d.jsonl", kDocs), dir.write("s.jsonl", summaries_for()));
  CHECK(c.documents().size() == 2);
  CHECK(c.summaries().size() == 6);
  const auto systems = c.systems();
  REQUIRE(systems.size() == 3);
  for (const auto& [_, ids] : systems) CHECK(ids.size() == 2);
  CHECK(c.find_summary("led-d2")->doc_id == "d2");
  CHECK(c.document_for(*c.find_summary("led-d2")).doc_id == "d2");
  CHECK(c.find_summary("nope") == nullptr);
}

TEST_CASE("a summary naming a missing document is a reference error naming it") {
  TempDir dir;
  const auto docs = dir.write("d.jsonl", kDocs);
  const auto sums = dir.write("s.jsonl", R"({"summary_id":"s1","doc_id":"d9","system_id":"x","text":"t"})" "\n");
  try {
    ingest_corpus(docs, sums);
    FAIL("expected ReferenceError");
  } catch (const ReferenceError& e) {
    CHECK(e.id() == "d9");
  }
}

TEST_CASE("an empty summary file is a valid corpus") {
  TempDir dir;
  const Corpus c = ingest_corpus(dir.write("d.jsonl", kDocs), dir.write("s.jsonl", ""));
  CHECK(c.summaries().empty());
  CHECK(c.systems().empty());
}

TEST_CASE("duplicate IDs are rejected") {
  TempDir dir;
  const auto docs = dir.write("d.jsonl", std::string(kDocs) + R"({"doc_id":"d1","text":"again"})" "\n");
  CHECK_THROWS_AS(ingest_corpus(docs, dir.write("s.jsonl", "")), DuplicateError);
  const auto dup = R"({"summary_id":"s","doc_id":"d1","system_id":"x","text":"t"})" "\n";
  CHECK_THROWS_AS(ingest_corpus(dir.write("d2.jsonl", kDocs), dir.write("s2.jsonl", std::string(dup) + dup)),
                  DuplicateError);
}

TEST_CASE("parse failures carry the line number") {
  TempDir dir;
  const auto docs = dir.write("d.jsonl", std::string(kDocs) + "\n{not json\n");
  try {
    ingest_corpus(docs, dir.write("s.jsonl", ""));
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
  }
  const auto missing = dir.write("m.jsonl", R"({"summary_id":"s","doc_id":"d1","text":"t"})" "\n");
  try {
    ingest_corpus(dir.write("d2.jsonl", kDocs), missing);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
  }
}

TEST_CASE("computed sentences are ordered, disjoint and match their spans") {
  std::istringstream in(kDocs);
  const auto docs = read_documents(in, "mem");
  REQUIRE(docs.size() == 2);
  CHECK(docs[0].sentences.size() == 3);
  CHECK(docs[0].sentences[1].text == "Dr. Lee led it.");
  for (const auto& d : docs) {
    std::size_t prev_end = 0;
    for (std::size_t i = 0; i < d.sentences.size(); ++i) {
      const auto& s = d.sentences[i];
      CHECK(s.index == i);
      CHECK(s.span.start >= prev_end);
      CHECK(s.span.end <= d.text.size());
      CHECK(d.text.substr(s.span.start, s.span.size()) == s.text);
      prev_end = s.span.end;
    }
  }
}

TEST_CASE("given sentences override automatic splitting") {
  std::istringstream in(
      R"({"doc_id":"d","text":"One. Two. Three.","sentences":["One. Two.","Three."]})" "\n"
      R"({"doc_id":"e","text":"Alpha beta gamma","sentences":[{"start":0,"end":5},{"start":6,"end":16,"text":"beta gamma"}]})"
      "\n");
  const auto docs = read_documents(in, "mem");
  REQUIRE(docs[0].sentences.size() == 2);
  CHECK(docs[0].sentences[1].span == Span{10, 16});
  REQUIRE(docs[1].sentences.size() == 2);
  CHECK(docs[1].sentences[0].text == "Alpha");

  std::istringstream missing(R"({"doc_id":"d","text":"One.","sentences":["Two."]})" "\n");
  CHECK_THROWS_AS(read_documents(missing, "mem"), ParseError);
  std::istringstream mismatch(R"({"doc_id":"d","text":"One.","sentences":[{"start":0,"end":4,"text":"Two."}]})" "\n");
  CHECK_THROWS_AS(read_documents(mismatch, "mem"), ParseError);
}

TEST_CASE("text is NFC and newline normalized on ingest") {
  std::istringstream in("{\"doc_id\":\"d\",\"text\":\"Cafe\\u0301 open.\\r\\nNext.\"}\n");
  const auto docs = read_documents(in, "mem");
  CHECK(docs[0].text == "Caf\xC3\xA9 open.\nNext.");
  CHECK(docs[0].sentences[1].span.start == 12);
}

TEST_CASE("canonical export round-trips byte for byte") {
  TempDir dir;
  const Corpus first = ingest_corpus(dir.write("d.jsonl", kDocs), dir.write("s.jsonl", summaries_for()));
  std::ostringstream docs1, sums1;
  write_documents(docs1, first);
  write_summaries(sums1, first);
  const Corpus second = ingest_corpus(dir.write("d2.jsonl", docs1.str()), dir.write("s2.jsonl", sums1.str()));
  std::ostringstream docs2, sums2;
  write_documents(docs2, second);
  write_summaries(sums2, second);
  CHECK(docs1.str() == docs2.str());
  CHECK(sums1.str() == sums2.str());
  CHECK(docs1.str() == testing::read_file(dir.path() / "d2.jsonl"));
}

TEST_CASE("metric scores: counts, non-numeric rows, coverage") {
  TempDir dir;
  std::string docs, sums, metric = "summary_id,bartscore\n";
  docs = R"({"doc_id":"d","text":"Source."})" "\n";
  for (int i = 0; i < 120; ++i) {
    const auto id = "s" + std::to_string(i);
    sums += R"({"summary_id":")" + id + R"(","doc_id":"d","system_id":"x","text":"t"})" "\n";
    metric += id + "," + std::to_string(i * 0.5) + "\n";
  }
  const Corpus c = ingest_corpus(dir.write("d.jsonl", docs), dir.write("s.jsonl", sums));
  const auto table = ingest_metric_scores(dir.write("m.csv", metric), c);
  CHECK(table.metric_name == "bartscore");
  CHECK(table.scores.size() == 120);
  CHECK(table.scores.at("s3") == 1.5);

  try {
    ingest_metric_scores(dir.write("bad.csv", "summary_id,bartscore\ns1, abc\n"));
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }

  std::string partial = "summary_id,bartscore\n";
  for (int i = 0; i < 120; ++i) {
    if (i != 57) partial += "s" + std::to_string(i) + ",1\n";
  }
  try {
    ingest_metric_scores(dir.write("p.csv", partial), c);
    FAIL("expected MissingDataError");
  } catch (const MissingDataError& e) {
    CHECK(e.ids() == std::vector<std::string>{"s57"});
  }

  try {
    ingest_metric_scores(dir.write("u.csv", metric + "ghost,1\n"), c);
    FAIL("expected ReferenceError");
  } catch (const ReferenceError& e) {
    CHECK(e.id() == "ghost");
  }
  CHECK_THROWS_AS(ingest_metric_scores(dir.write("dup.csv", "summary_id,m\ns1,1\ns1,2\n")), ParseError);
}
