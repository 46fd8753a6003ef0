#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "helpers.hpp"

using namespace commsense;

namespace {

std::string two_segment_doc() {
    return R"({
  "id": "c1",
  "duration_ms": 9000,
  "metadata": {},
  "segments": [
    {"index": 0, "role": "patient", "start_ms": 0, "end_ms": 4000, "text": "I am scared."},
    {"index": 1, "role": "provider", "start_ms": 5000, "end_ms": 9000,
     "text": "Tell me more about that."}
  ]
})";
}

}  // namespace

TEST_CASE("parse_transcript maps fields and derives the inter-segment gap") {
    Conversation conv = parse_transcript(two_segment_doc());
    REQUIRE(conv.segments.size() == 2);
    CHECK(conv.id == "c1");
    CHECK(conv.segments[0].role == Role::patient);
    CHECK(conv.segments[1].role == Role::provider);
    CHECK(conv.segments[1].start_ms - conv.segments[0].end_ms == 1000);
    CHECK(pause_after(conv, 0).gap_ms == 1000);
    CHECK(conv.segments[0].sentences.size() == 1);
}

TEST_CASE("parse_transcript rejects an inverted time range with the segment index") {
    std::string doc = R"({"id":"x","duration_ms":9000,"segments":[
      {"index":0,"role":"patient","start_ms":0,"end_ms":4000,"text":"Hi."},
      {"index":1,"role":"provider","start_ms":6000,"end_ms":5000,"text":"Hello."}]})";
    CHECK_THROWS_WITH_AS(parse_transcript(doc), "invalid time range at segment 1", ParseError);
}

TEST_CASE("parse_transcript validation errors") {
    CHECK_THROWS_AS(parse_transcript("not json"), ParseError);
    CHECK_THROWS_AS(parse_transcript(R"({"id":"x","duration_ms":1,"segments":[
      {"index":0,"role":"narrator","start_ms":0,"end_ms":1,"text":"a"}]})"),
                    ParseError);
    CHECK_THROWS_AS(parse_transcript(R"({"id":"x","duration_ms":1,"segments":[
      {"index":0,"role":"patient","start_ms":-5,"end_ms":1,"text":"a"}]})"),
                    ParseError);
    CHECK_THROWS_AS(parse_transcript(R"({"id":"x","duration_ms":1,"segments":[
      {"index":0,"role":"patient","start_ms":0,"end_ms":1,"text":"  "}]})"),
                    ParseError);
    // unknown top-level key: tolerated by default, rejected in strict mode
    std::string extra = R"({"id":"x","duration_ms":1,"extra":1,"segments":[
      {"index":0,"role":"patient","start_ms":0,"end_ms":1,"text":"a"}]})";
    CHECK_NOTHROW(parse_transcript(extra));
    CHECK_THROWS_WITH_AS(parse_transcript(extra, true), "unknown top-level key 'extra'",
                         ParseError);
}

TEST_CASE("split_sentences handles terminators and question detection") {
    auto spans = split_sentences("How are you? I see.");
    REQUIRE(spans.size() == 2);
    CHECK(spans[0].is_question);
    CHECK_FALSE(spans[1].is_question);
    CHECK(spans[0].tokens == std::vector<std::string>{"how", "are", "you"});
    CHECK(spans[1].tokens == std::vector<std::string>{"i", "see"});
}

TEST_CASE("split_sentences splits on abbreviation dots unless excepted") {
    CHECK(split_sentences("Dr. Smith arrived.").size() == 2);
    CHECK(split_sentences("Dr. Smith arrived.", {"dr"}).size() == 1);
}

TEST_CASE("split_sentences tokenization details") {
    auto spans = split_sentences("You're well-known here");
    REQUIRE(spans.size() == 1);
    CHECK(spans[0].tokens == std::vector<std::string>{"you're", "well", "known", "here"});
    CHECK(split_sentences("   ").empty());
}

TEST_CASE("sentence spans cover all non-whitespace text on 500 random strings") {
    std::mt19937 rng(101);
    std::uniform_int_distribution<int> nsent(1, 8);
    for (int iter = 0; iter < 500; ++iter) {
        std::string text;
        int n = nsent(rng);
        for (int i = 0; i < n; ++i) {
            if (i) text += ' ';
            text += testutil::random_sentence_text(rng);
        }
        auto spans = split_sentences(text);
        // spans ordered, non-overlapping
        std::size_t prev_end = 0;
        std::string covered;
        for (const auto& sp : spans) {
            REQUIRE(sp.char_start >= prev_end);
            REQUIRE(sp.char_end > sp.char_start);
            REQUIRE(!sp.tokens.empty());
            for (std::size_t k = sp.char_start; k < sp.char_end; ++k) covered += text[k];
            // everything between spans is whitespace
            for (std::size_t k = prev_end; k < sp.char_start; ++k)
                REQUIRE(std::isspace(static_cast<unsigned char>(text[k])));
            prev_end = sp.char_end;
        }
        for (std::size_t k = prev_end; k < text.size(); ++k)
            REQUIRE(std::isspace(static_cast<unsigned char>(text[k])));
        // concatenated span text reproduces original non-whitespace characters
        std::string expect, got;
        for (char c : text)
            if (!std::isspace(static_cast<unsigned char>(c))) expect += c;
        for (char c : covered)
            if (!std::isspace(static_cast<unsigned char>(c))) got += c;
        REQUIRE(expect == got);
    }
}

TEST_CASE("parse-serialize round trip is stable on 200 random documents") {
    std::mt19937 rng(202);
    for (int i = 0; i < 200; ++i) {
        Conversation conv = testutil::random_conversation(rng, "rt-" + std::to_string(i));
        std::string once = serialize_transcript(conv);
        Conversation reparsed = parse_transcript(once);
        std::string twice = serialize_transcript(reparsed);
        REQUIRE(once == twice);
        REQUIRE(reparsed.id == conv.id);
        REQUIRE(reparsed.segments.size() == conv.segments.size());
    }
}

TEST_CASE("speech_ratio arithmetic and properties") {
    Conversation conv;
    conv.id = "r";
    conv.duration_ms = 300000;
    conv.segments.push_back(testutil::make_segment(0, Role::provider, 0, 120000, "Hello."));
    CHECK(speech_ratio(conv, Role::provider) == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(speech_ratio(conv, Role::patient) == 0.0);

    Conversation empty;
    empty.id = "z";
    empty.duration_ms = 0;
    CHECK_THROWS_AS(speech_ratio(empty, Role::provider), std::invalid_argument);

    std::mt19937 rng(303);
    for (int i = 0; i < 100; ++i) {
        Conversation c = testutil::random_conversation(rng, "sr-" + std::to_string(i));
        CHECK(speech_ratio(c, Role::provider) + speech_ratio(c, Role::patient) <= 1.0 + 1e-12);
    }
}
