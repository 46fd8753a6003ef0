#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace commsense {

enum class Role { provider, patient };

std::string role_name(Role r);
Role role_from_name(const std::string& name);

/// A sentence within a segment: character span plus derived tokens.
struct SentenceSpan {
    std::size_t char_start = 0;
    std::size_t char_end = 0;  // one past the last character
    std::vector<std::string> tokens;
    std::vector<std::size_t> token_offsets;  // char offset of each token in segment text
    bool is_question = false;
};

struct Segment {
    int index = 0;
    Role role = Role::provider;
    std::int64_t start_ms = 0;
    std::int64_t end_ms = 0;
    std::string text;
    std::vector<SentenceSpan> sentences;

    /// All tokens of the segment, sentence order preserved.
    std::vector<std::string> all_tokens() const;
};

struct Conversation {
    std::string id;
    std::int64_t duration_ms = 0;
    std::map<std::string, std::string> metadata;
    std::vector<Segment> segments;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Splits text into sentence spans. Boundaries are '.', '?' or '!' followed by
/// whitespace or end of text; a trailing fragment becomes a final sentence.
/// Tokens are lowercase maximal runs of letters, digits and apostrophes
/// (hyphenated words split). Fragments without any token are merged into the
/// neighboring sentence. Words in `abbreviations` (lowercase, no dot) do not
/// terminate a sentence at a following '.'.
std::vector<SentenceSpan> split_sentences(const std::string& text,
                                          const std::set<std::string>& abbreviations = {});

/// Parses and validates the transcript JSON document. In strict mode unknown
/// top-level keys are rejected. Derived sentences and tokens are populated.
Conversation parse_transcript(const std::string& bytes, bool strict = false,
                              const std::set<std::string>& abbreviations = {});

/// Serializes a Conversation back to the transcript JSON format.
std::string serialize_transcript(const Conversation& conv);

/// Fraction of conversation time covered by segments with the given role.
double speech_ratio(const Conversation& conv, Role role);

}  // namespace commsense
