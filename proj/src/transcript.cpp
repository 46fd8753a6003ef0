#include "commsense/transcript.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "json.hpp"

namespace commsense {

namespace {

bool is_token_char(char c) {
    unsigned char u = static_cast<unsigned char>(c);
    return std::isalnum(u) != 0 || c == '\'';
}

bool is_ws(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

void tokenize_range(const std::string& text, std::size_t begin, std::size_t end,
                    std::vector<std::string>& tokens, std::vector<std::size_t>& offsets) {
    std::size_t i = begin;
    while (i < end) {
        if (is_token_char(text[i])) {
            std::size_t j = i;
            while (j < end && is_token_char(text[j])) ++j;
            tokens.push_back(lower(text.substr(i, j - i)));
            offsets.push_back(i);
            i = j;
        } else {
            ++i;
        }
    }
}

// Last word (token chars) ending right before position `dot`.
std::string word_before(const std::string& text, std::size_t dot) {
    if (dot == 0 || !is_token_char(text[dot - 1])) return {};
    std::size_t j = dot;
    while (j > 0 && is_token_char(text[j - 1])) --j;
    return lower(text.substr(j, dot - j));
}

}  // namespace

std::string role_name(Role r) { return r == Role::provider ? "provider" : "patient"; }

Role role_from_name(const std::string& name) {
    if (name == "provider") return Role::provider;
    if (name == "patient") return Role::patient;
    throw ParseError("unknown role value '" + name + "'");
}

std::vector<std::string> Segment::all_tokens() const {
    std::vector<std::string> out;
    for (const auto& s : sentences) out.insert(out.end(), s.tokens.begin(), s.tokens.end());
    return out;
}

std::vector<SentenceSpan> split_sentences(const std::string& text,
                                          const std::set<std::string>& abbreviations) {
    std::vector<SentenceSpan> spans;
    const std::size_t n = text.size();

    std::size_t i = 0;
    bool open = false;          // a span is being accumulated
    std::size_t span_start = 0;

    auto close_span = [&](std::size_t span_end) {
        SentenceSpan sp;
        sp.char_start = span_start;
        sp.char_end = span_end;
        tokenize_range(text, span_start, span_end, sp.tokens, sp.token_offsets);
        if (sp.tokens.empty()) {
            // fragment without words: merge into the previous sentence
            if (!spans.empty()) {
                spans.back().char_end = span_end;
            }
            // if there is no previous span, keep accumulating into the next one
            open = spans.empty();
            return;
        }
        // trailing question mark decides is_question
        std::size_t k = span_end;
        while (k > sp.char_start && is_ws(text[k - 1])) --k;
        sp.is_question = k > sp.char_start && text[k - 1] == '?';
        spans.push_back(std::move(sp));
        open = false;
    };

    while (i < n) {
        if (!open) {
            if (is_ws(text[i])) {
                ++i;
                continue;
            }
            span_start = i;
            open = true;
        }
        char c = text[i];
        if (c == '.' || c == '?' || c == '!') {
            bool at_end = i + 1 == n;
            bool before_ws = !at_end && is_ws(text[i + 1]);
            bool abbrev = c == '.' && abbreviations.count(word_before(text, i)) > 0;
            if ((at_end || before_ws) && !abbrev) {
                close_span(i + 1);
                ++i;
                continue;
            }
        }
        ++i;
    }
    if (open) close_span(n);

    // recompute is_question for spans that got extended by merged fragments
    for (auto& sp : spans) {
        std::size_t k = sp.char_end;
        while (k > sp.char_start && is_ws(text[k - 1])) --k;
        sp.is_question = k > sp.char_start && text[k - 1] == '?';
    }
    return spans;
}

Conversation parse_transcript(const std::string& bytes, bool strict,
                              const std::set<std::string>& abbreviations) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(bytes);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed transcript document: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("transcript root must be an object");

    static const std::set<std::string> known = {"id", "duration_ms", "metadata", "segments"};
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (!known.count(it.key())) {
            if (strict) throw ParseError("unknown top-level key '" + it.key() + "'");
        }
    }
    for (const auto& key : known) {
        if (key != "metadata" && !doc.contains(key))
            throw ParseError("missing top-level key '" + key + "'");
    }

    Conversation conv;
    if (!doc["id"].is_string()) throw ParseError("'id' must be a string");
    conv.id = doc["id"].get<std::string>();
    if (!doc["duration_ms"].is_number_integer() || doc["duration_ms"].get<std::int64_t>() < 0)
        throw ParseError("'duration_ms' must be a non-negative integer");
    conv.duration_ms = doc["duration_ms"].get<std::int64_t>();
    if (doc.contains("metadata")) {
        if (!doc["metadata"].is_object()) throw ParseError("'metadata' must be an object");
        for (auto it = doc["metadata"].begin(); it != doc["metadata"].end(); ++it) {
            if (!it.value().is_string())
                throw ParseError("metadata value for '" + it.key() + "' must be a string");
            conv.metadata[it.key()] = it.value().get<std::string>();
        }
    }
    if (!doc["segments"].is_array()) throw ParseError("'segments' must be an array");

    std::int64_t prev_end = 0;
    int expect_index = 0;
    for (const auto& js : doc["segments"]) {
        std::ostringstream where;
        where << "segment " << expect_index;
        if (!js.is_object()) throw ParseError(where.str() + ": must be an object");
        for (const char* req : {"index", "role", "start_ms", "end_ms", "text"}) {
            if (!js.contains(req))
                throw ParseError(where.str() + ": missing key '" + req + "'");
        }
        Segment seg;
        seg.index = js["index"].get<int>();
        if (seg.index != expect_index)
            throw ParseError(where.str() + ": index " + std::to_string(seg.index) +
                             " does not match position");
        seg.role = role_from_name(js["role"].get<std::string>());
        if (!js["start_ms"].is_number_integer() || !js["end_ms"].is_number_integer())
            throw ParseError(where.str() + ": timestamps must be integers");
        seg.start_ms = js["start_ms"].get<std::int64_t>();
        seg.end_ms = js["end_ms"].get<std::int64_t>();
        if (seg.start_ms < 0)
            throw ParseError("negative timestamp at segment " + std::to_string(seg.index));
        if (seg.end_ms < seg.start_ms)
            throw ParseError("invalid time range at segment " + std::to_string(seg.index));
        if (seg.start_ms < prev_end)
            throw ParseError("unordered or overlapping timestamps at segment " +
                             std::to_string(seg.index));
        seg.text = js["text"].get<std::string>();
        bool all_ws = std::all_of(seg.text.begin(), seg.text.end(), is_ws);
        if (seg.text.empty() || all_ws)
            throw ParseError("empty segment text at segment " + std::to_string(seg.index));
        seg.sentences = split_sentences(seg.text, abbreviations);
        prev_end = seg.end_ms;
        ++expect_index;
        conv.segments.push_back(std::move(seg));
    }
    if (conv.segments.empty()) throw ParseError("transcript has no segments");
    if (conv.duration_ms < conv.segments.back().end_ms)
        throw ParseError("duration_ms shorter than last segment end");
    return conv;
}

std::string serialize_transcript(const Conversation& conv) {
    nlohmann::ordered_json doc;
    doc["id"] = conv.id;
    doc["duration_ms"] = conv.duration_ms;
    doc["metadata"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : conv.metadata) doc["metadata"][k] = v;
    doc["segments"] = nlohmann::ordered_json::array();
    for (const auto& seg : conv.segments) {
        nlohmann::ordered_json js;
        js["index"] = seg.index;
        js["role"] = role_name(seg.role);
        js["start_ms"] = seg.start_ms;
        js["end_ms"] = seg.end_ms;
        js["text"] = seg.text;
        doc["segments"].push_back(std::move(js));
    }
    return doc.dump(2) + "\n";
}

double speech_ratio(const Conversation& conv, Role role) {
    if (conv.duration_ms <= 0) throw std::invalid_argument("speech_ratio: zero duration");
    std::int64_t covered = 0;
    for (const auto& seg : conv.segments)
        if (seg.role == role) covered += seg.end_ms - seg.start_ms;
    return static_cast<double>(covered) / static_cast<double>(conv.duration_ms);
}

}  // namespace commsense
