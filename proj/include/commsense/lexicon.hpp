#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "commsense/transcript.hpp"

namespace commsense {

/// Word-category lexicon. Entries are literal lowercase tokens or stems with a
/// terminal wildcard ("feel*").
struct Lexicon {
    std::map<std::string, std::vector<std::string>> categories;

    static const std::vector<std::string>& required_categories();
    bool token_matches(const std::string& category, const std::string& token) const;
};

struct CategoryScores {
    std::map<std::string, double> rates;  // matches per 100 words
    int word_count = 0;
    double words_per_sentence = 0.0;
    double big_word_rate = 0.0;      // fraction of tokens with >= big_word_letters letters
    double authenticity_proxy = 0.0; // clamp(first + second - cog_process, 0, 100)

    double rate(const std::string& category) const {
        auto it = rates.find(category);
        return it == rates.end() ? 0.0 : it->second;
    }
};

struct JargonDict {
    std::set<std::string> terms;       // lowercase, single- or multi-word (space separated)
    std::set<std::string> exclusions;
};

struct JargonMatch {
    std::string term;
    std::size_t token_index = 0;  // index of the first token of the match
    std::size_t token_count = 1;
};

/// Parses the lexicon file format: '%name' category headers, comma- or
/// newline-separated entries, '#' comments. All eight required categories must
/// be present.
Lexicon load_lexicon(const std::string& bytes);

std::string serialize_lexicon(const Lexicon& lex);

/// The bundled starter lexicon (same content as data/lexicon.txt).
const std::string& builtin_lexicon_text();
const std::string& builtin_jargon_text();
const std::string& builtin_jargon_exclusions_text();
const std::string& builtin_stopwords_text();

/// Per-100-words category rates plus sentence stats.
CategoryScores score_categories(const std::vector<std::string>& tokens, const Lexicon& lex,
                                int sentence_count = 1, int big_word_letters = 7);

JargonDict load_jargon(const std::string& terms_bytes, const std::string& exclusions_bytes = "");

/// Greedy longest-match over token n-grams (n <= 4): among all candidate
/// matches the longer span wins, ties broken by earlier position; chosen
/// matches never overlap. Returned in token order.
std::vector<JargonMatch> find_jargon(const std::vector<std::string>& tokens,
                                     const JargonDict& dict);

/// True iff the sentence holding the match, or the immediately following one,
/// contains one of the cue phrases as a consecutive token run, or a
/// parenthetical opens after the matched term inside its sentence.
bool explanation_cue_present(const Segment& segment, const JargonMatch& match,
                             const std::vector<std::string>& cue_phrases);

const std::vector<std::string>& default_explanation_cues();

}  // namespace commsense
