#pragma once

#include <variant>

#include "commsense/features.hpp"

namespace commsense {

enum class Metric { understanding, empathy, emotion, presence, clarity };

const std::vector<Metric>& all_metrics();
std::string metric_name(Metric m);
Metric metric_from_name(const std::string& name);

enum class Label { good, bad, none };

std::string label_name(Label l);

struct RuleConfig {
    std::int64_t pause_good_ms = 10000;
    int words_per_sentence_max = 15;
    double speech_ratio_max = 0.5;
    double similarity_threshold = 0.6;
    double high_emotion_rate = 5.0;  // per 100 words, pos + neg
    double high_neg_rate = 3.0;
    double polarity_dead_zone = 0.5;
    double high_cog_rate = 8.0;
    double jargon_overuse_rate = 2.0;  // matched tokens per 100 words
    double second_over_first_margin = 0.0;

    void validate() const;
};

struct Evidence {
    std::string rule;
    std::variant<double, std::string> value;
};

struct MetricLabel {
    int segment_index = 0;
    Metric metric = Metric::understanding;
    Label label = Label::none;
    std::vector<Evidence> evidence;
};

struct ConversationFlags {
    double provider_speech_ratio = 0.0;
    bool ratio_pass = false;       // provider speech ratio < speech_ratio_max
    bool silence_encouraged = false;  // some confident pause >= pause_good_ms
};

struct Assessment {
    std::string conversation_id;
    std::map<std::string, std::string> metadata;
    RuleConfig config;
    ConversationFlags flags;
    std::vector<MetricLabel> labels;  // 5 per segment, segment-major order
};

enum class Polarity { positive, negative, neutral };
Polarity emotion_polarity(const CategoryScores& scores, double dead_zone);

MetricLabel assess_understanding(const SegmentFeatures& f);
MetricLabel assess_empathy(const SegmentFeatures& f);
MetricLabel assess_emotion(const SegmentFeatures& f, const SegmentFeatures* prev_patient,
                           const std::optional<PauseMeasure>& pause, const RuleConfig& cfg);
MetricLabel assess_presence(const SegmentFeatures& f, const RuleConfig& cfg);
MetricLabel assess_clarity(const SegmentFeatures& f, const RuleConfig& cfg);

/// Full per-conversation assessment: exactly five labels per segment, patient
/// segments labeled none for every provider-directed metric.
Assessment assess_conversation(const Conversation& conv, const ConversationFeatures& features,
                               const RuleConfig& config);

std::string serialize_assessment(const Assessment& a);
Assessment parse_assessment(const std::string& bytes);

}  // namespace commsense
