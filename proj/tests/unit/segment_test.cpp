#include <doctest.h>

#include <string>
#include <vector>

#include "longeval/rng.hpp"
#include "longeval/segment.hpp"
#include "longeval/text.hpp"

using namespace longeval;

namespace {

std::vector<std::string> texts(const std::vector<Sentence>& sentences) {
  std::vector<std::string> out;
  for (const auto& s : sentences) out.push_back(s.text);
  return out;
}

std::vector<std::string> texts(const std::vector<FineUnit>& units) {
  std::vector<std::string> out;
  for (const auto& u : units) out.push_back(u.text);
  return out;
}

std::vector<FineUnit> units_of(const std::string& sentence, const SegmentConfig& config = {}) {
  return segment_units(sentence, {0, sentence.size()}, config);
}

// Every non-whitespace byte lies in exactly one unit; spans are ordered,
// disjoint, trimmed, and their text matches.
void check_coverage(const std::string& text, const std::vector<FineUnit>& units) {
  std::vector<int> covered(text.size(), 0);
  std::size_t prev_end = 0;
  for (std::size_t i = 0; i < units.size(); ++i) {
    const auto& u = units[i];
    REQUIRE(u.unit_index == i);
    REQUIRE(u.span.start >= prev_end);
    REQUIRE(u.span.end <= text.size());
    REQUIRE(u.span.start < u.span.end);
    CHECK(text.substr(u.span.start, u.span.size()) == u.text);
    CHECK(trim(u.text) == u.text);
    for (std::size_t p = u.span.start; p < u.span.end; ++p) ++covered[p];
    prev_end = u.span.end;
  }
  for (std::size_t p = 0; p < text.size(); ++p) {
    if (!is_space(text[p])) REQUIRE(covered[p] == 1);
  }
}

const char* kLongSummary =
    "The story follows Captain Mara Voss, who commands a small survey ship sent to chart a dying star system. "
    "Early in the voyage the crew discovers an abandoned station orbiting the third planet, and Voss decides to "
    "board it despite objections from her first officer. Inside, they find logs describing a colony that fled "
    "when the star began to flare, but the final entries suggest that a handful of colonists stayed behind. "
    "The engineer, Tomas, restores partial power; the station's archive reveals coordinates for a shelter on "
    "the planet's surface. Voss leads a landing party to the shelter while the ship remains in orbit. On the "
    "surface they encounter harsh storms, although the shelter itself is intact and stocked with supplies. "
    "They find no survivors, but they recover a journal written by the colony's doctor, which explains that the "
    "remaining colonists left on a second ship that was never heard from again. Tensions rise when the first "
    "officer accuses Voss of risking the crew for sentimental reasons, and the two argue openly in front of the "
    "others. A sudden flare damages the ship's shields, so the landing party must return quickly. In the end "
    "the crew escapes the system safely. Voss records the colonists' names in the official log because she "
    "believes they deserve to be remembered, and the story closes as the ship sets course for home while the "
    "star continues to burn behind them.";

}  // namespace

TEST_CASE("split_sentences: terminators, empty text, abbreviations") {
  CHECK(split_sentences("A. B? C!").size() == 3);
  CHECK(split_sentences("").empty());
  CHECK(split_sentences("   \n ").empty());
  CHECK(texts(split_sentences("He met Dr. Smith. She left.")) ==
        std::vector<std::string>{"He met Dr. Smith.", "She left."});
  CHECK(split_sentences("See Fig. 3 for details. Then stop.").size() == 2);
  CHECK(split_sentences("Use tools, e.g. hammers. Done.").size() == 2);
  CHECK(split_sentences("Really?! Yes.").size() == 2);
  CHECK(texts(split_sentences("He said \"Stop.\" Then he left.")) ==
        std::vector<std::string>{"He said \"Stop.\"", "Then he left."});
  CHECK(split_sentences("Pi is 3.14 exactly. Ok.").size() == 2);
  CHECK(split_sentences("A heading\n\nThen body text").size() == 2);
  CHECK(split_sentences("No terminator at the end").size() == 1);
}

TEST_CASE("sentence spans tile the text up to whitespace") {
  const std::string text = "  First one.  Second one?\nThird!  ";
  const auto sentences = split_sentences(text);
  REQUIRE(sentences.size() == 3);
  std::size_t prev = 0;
  for (const auto& s : sentences) {
    CHECK(text.substr(s.span.start, s.span.size()) == s.text);
    for (std::size_t p = prev; p < s.span.start; ++p) CHECK(is_space(text[p]));
    prev = s.span.end;
  }
  for (std::size_t p = prev; p < text.size(); ++p) CHECK(is_space(text[p]));
}

TEST_CASE("segment_units: comma plus conjunction splits") {
  CHECK(texts(units_of("He ran to the store, and she stayed home.")) ==
        std::vector<std::string>{"He ran to the store,", "and she stayed home."});
  CHECK(units_of("It rained.").size() == 1);
}

TEST_CASE("segment_units: semicolon and conjunction example") {
  // With the default minimum of four words the two-word clauses merge; with a
  // minimum of one every rule-defined clause stands alone.
  SegmentConfig loose;
  loose.min_unit_words = 1;
  CHECK(texts(units_of("X happened; Y happened, but Z did not.", loose)) ==
        std::vector<std::string>{"X happened;", "Y happened,", "but Z did not."});
  CHECK(texts(units_of("The trial was stopped early; the drug caused liver damage, but the company did not report it."))
        == std::vector<std::string>{"The trial was stopped early;", "the drug caused liver damage,",
                                    "but the company did not report it."});
}

TEST_CASE("segment_units: no split on bare noun-phrase coordination") {
  CHECK(units_of("She bought cats and dogs and birds for the farm.").size() == 1);
}

TEST_CASE("segment_units: dashes before a conjunction split") {
  CHECK(units_of("The mayor resigned in March -- because the audit found missing funds.").size() == 2);
  CHECK(units_of("The mayor resigned in March \xE2\x80\x94 because the audit found missing funds.").size() == 2);
  CHECK(units_of("The mayor resigned in March - because the audit found missing funds.").size() == 2);
}

TEST_CASE("segment_units: short fragments merge left, a short first fragment merges right") {
  CHECK(texts(units_of("The committee approved the budget, and so on.")) ==
        std::vector<std::string>{"The committee approved the budget, and so on."});
  CHECK(texts(units_of("Yes, but the committee rejected the second proposal.")) ==
        std::vector<std::string>{"Yes, but the committee rejected the second proposal."});
}

TEST_CASE("segment_units: custom conjunction list from config") {
  SegmentConfig config = SegmentConfig::from_json({{"conjunctions", {"then"}}, {"min_unit_words", 2}});
  CHECK(config.min_unit_words == 2);
  CHECK(units_of("He ran to the store, then she stayed home.", config).size() == 2);
  CHECK(units_of("He ran to the store, and she stayed home.", config).size() == 1);
  CHECK(SegmentConfig::from_json(SegmentConfig{}.to_json()).conjunctions == SegmentConfig{}.conjunctions);
}

TEST_CASE("segment_summary numbers units across sentences and covers the text") {
  const std::string text = "He ran to the store, and she stayed home. It rained all day long.";
  const auto units = segment_summary("s1", text);
  REQUIRE(units.size() == 3);
  CHECK(units[2].unit_index == 2);
  CHECK(units[2].summary_id == "s1");
  check_coverage(text, units);
}

TEST_CASE("a summary of about 227 words yields a sane unit count") {
  const std::string text = kLongSummary;
  const auto words = count_words(text);
  CHECK(words >= 220);
  CHECK(words <= 240);
  const auto units = segment_summary("long", text);
  CHECK(units.size() >= 5);
  CHECK(units.size() <= 60);
  check_coverage(text, units);
}

TEST_CASE("property: segmentation is deterministic and covers every character") {
  const std::vector<std::string> words = {"the", "court", "ruled", "and", "but", "which", "so", "data", "Dr.",
                                          "e.g.", "results", "were", "clear", "when", "patients", "improved", "or"};
  const std::vector<std::string> joints = {" ", " ", " ", ", ", "; ", " -- ", " - ", "? ", ". ", "! ", "\n", "\n\n"};
  auto rng = derive_stream(2024, 0);
  for (int trial = 0; trial < 500; ++trial) {
    std::string text;
    const auto n = 1 + rng.below(40);
    for (std::size_t i = 0; i < n; ++i) {
      text += words[rng.below(words.size())];
      text += joints[rng.below(joints.size())];
    }
    if (rng.below(2)) text += ".";
    INFO(text);
    SegmentConfig config;
    config.min_unit_words = 1 + rng.below(5);
    const auto units = segment_summary("p", text, config);
    check_coverage(text, units);
    CHECK(units == segment_summary("p", text, config));
    for (const auto& s : split_sentences(text)) CHECK_FALSE(segment_units(s.text, s.span, config).empty());
  }
}

TEST_CASE("FineUnit json round-trip") {
  const FineUnit u{"s1", 3, "and she stayed home.", {21, 41}};
  const nlohmann::json j = u;
  CHECK(j.at("start") == 21);
  CHECK(j.get<FineUnit>() == u);
}
