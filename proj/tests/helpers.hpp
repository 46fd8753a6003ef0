#pragma once

#include <random>
#include <string>
#include <vector>

#include "commsense/cli.hpp"

namespace testutil {

inline commsense::Segment make_segment(int index, commsense::Role role, std::int64_t start_ms,
                                        std::int64_t end_ms, const std::string& text) {
    commsense::Segment seg;
    seg.index = index;
    seg.role = role;
    seg.start_ms = start_ms;
    seg.end_ms = end_ms;
    seg.text = text;
    seg.sentences = commsense::split_sentences(text);
    return seg;
}

struct TurnSpec {
    commsense::Role role;
    std::string text;
    std::int64_t gap_before_ms = 1000;  // gap to previous segment end
    std::int64_t duration_ms = 3000;
};

inline commsense::Conversation make_conversation(const std::string& id,
                                                 const std::vector<TurnSpec>& turns) {
    commsense::Conversation conv;
    conv.id = id;
    std::int64_t clock = 0;
    int index = 0;
    for (const auto& t : turns) {
        clock += t.gap_before_ms;
        conv.segments.push_back(make_segment(index++, t.role, clock, clock + t.duration_ms,
                                             t.text));
        clock += t.duration_ms;
    }
    conv.duration_ms = clock + 1000;
    return conv;
}

inline commsense::ConversationFeatures features_for(
    const commsense::Conversation& conv, const commsense::Resources& res,
    const std::optional<commsense::EnergySeries>& energy = std::nullopt,
    const std::optional<commsense::IntervalSet>& overlaps = std::nullopt) {
    commsense::FeatureInputs inputs;
    inputs.lexicon = &res.lexicon;
    inputs.jargon = &res.jargon;
    inputs.explanation_cues = res.cues.explanation_cues;
    if (energy) inputs.silence = commsense::detect_silence(*energy);
    inputs.overlaps = overlaps;
    commsense::ClassifyConfig ccfg = res.cues.classify;
    ccfg.stopwords = res.stopwords;
    return commsense::compute_features(conv, inputs,
                                       commsense::baseline_classifiers(ccfg, res.stopwords));
}

inline const commsense::Resources& builtin_resources() {
    static const commsense::Resources res = commsense::load_resources(commsense::RunConfig{});
    return res;
}

inline commsense::Assessment assess(const commsense::Conversation& conv,
                                    const commsense::RuleConfig& cfg = {}) {
    return commsense::assess_conversation(conv, features_for(conv, builtin_resources()), cfg);
}

inline const commsense::MetricLabel& label_of(const commsense::Assessment& a, int segment,
                                              commsense::Metric metric) {
    for (const auto& l : a.labels)
        if (l.segment_index == segment && l.metric == metric) return l;
    throw std::runtime_error("label not found");
}

inline bool has_rule(const commsense::MetricLabel& l, const std::string& rule) {
    for (const auto& e : l.evidence)
        if (e.rule == rule) return true;
    return false;
}

/// Random lowercase word, 1-9 letters.
inline std::string random_word(std::mt19937& rng) {
    std::uniform_int_distribution<int> len(1, 9);
    std::uniform_int_distribution<int> ch(0, 25);
    std::string w;
    int n = len(rng);
    for (int i = 0; i < n; ++i) w.push_back(static_cast<char>('a' + ch(rng)));
    return w;
}

inline std::vector<std::string> random_tokens(std::mt19937& rng, int min_n, int max_n) {
    std::uniform_int_distribution<int> n(min_n, max_n);
    std::vector<std::string> out;
    int k = n(rng);
    for (int i = 0; i < k; ++i) out.push_back(random_word(rng));
    return out;
}

inline std::string random_sentence_text(std::mt19937& rng) {
    auto toks = random_tokens(rng, 1, 12);
    std::string s;
    for (std::size_t i = 0; i < toks.size(); ++i) {
        if (i) s += ' ';
        s += toks[i];
    }
    std::uniform_int_distribution<int> punct(0, 2);
    s += ".?!"[punct(rng)];
    return s;
}

inline commsense::Conversation random_conversation(std::mt19937& rng, const std::string& id) {
    std::uniform_int_distribution<int> nseg(1, 12);
    std::uniform_int_distribution<int> nsent(1, 4);
    std::uniform_int_distribution<std::int64_t> gap(0, 15000);
    std::uniform_int_distribution<std::int64_t> dur(500, 20000);
    std::uniform_int_distribution<int> role(0, 1);
    std::vector<TurnSpec> turns;
    int k = nseg(rng);
    for (int i = 0; i < k; ++i) {
        std::string text;
        int s = nsent(rng);
        for (int j = 0; j < s; ++j) {
            if (j) text += ' ';
            text += random_sentence_text(rng);
        }
        turns.push_back({role(rng) ? commsense::Role::provider : commsense::Role::patient, text,
                         gap(rng), dur(rng)});
    }
    auto conv = make_conversation(id, turns);
    if (k % 2) conv.metadata["session_date"] = "2024-05-01";
    return conv;
}

}  // namespace testutil
