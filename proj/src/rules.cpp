#include "commsense/rules.hpp"

#include <algorithm>

#include "json.hpp"

namespace commsense {

const std::vector<Metric>& all_metrics() {
    static const std::vector<Metric> ms = {Metric::understanding, Metric::empathy,
                                           Metric::emotion, Metric::presence, Metric::clarity};
    return ms;
}

std::string metric_name(Metric m) {
    switch (m) {
        case Metric::understanding: return "understanding";
        case Metric::empathy: return "empathy";
        case Metric::emotion: return "emotion";
        case Metric::presence: return "presence";
        case Metric::clarity: return "clarity";
    }
    return "understanding";
}

Metric metric_from_name(const std::string& name) {
    for (Metric m : all_metrics())
        if (metric_name(m) == name) return m;
    throw std::invalid_argument("unknown metric '" + name + "'");
}

std::string label_name(Label l) {
    switch (l) {
        case Label::good: return "good";
        case Label::bad: return "bad";
        case Label::none: return "none";
    }
    return "none";
}

void RuleConfig::validate() const {
    if (pause_good_ms <= 0 || words_per_sentence_max <= 0 || high_emotion_rate <= 0 ||
        high_neg_rate <= 0 || high_cog_rate <= 0 || jargon_overuse_rate <= 0 ||
        polarity_dead_zone <= 0)
        throw std::invalid_argument("rule thresholds must be positive");
    if (speech_ratio_max <= 0.0 || speech_ratio_max > 1.0)
        throw std::invalid_argument("speech_ratio_max must be in (0,1]");
    if (similarity_threshold <= 0.0 || similarity_threshold > 1.0)
        throw std::invalid_argument("similarity_threshold must be in (0,1]");
}

Polarity emotion_polarity(const CategoryScores& scores, double dead_zone) {
    const double diff = scores.rate("pos_emotion") - scores.rate("neg_emotion");
    if (diff > dead_zone) return Polarity::positive;
    if (diff < -dead_zone) return Polarity::negative;
    return Polarity::neutral;
}

namespace {

MetricLabel finalize(int index, Metric metric, std::vector<Evidence> good_ev,
                     std::vector<Evidence> bad_ev) {
    MetricLabel out;
    out.segment_index = index;
    out.metric = metric;
    if (!bad_ev.empty()) {
        out.label = Label::bad;
        out.evidence = std::move(bad_ev);
        // both polarities of evidence are retained when a good rule also fired
        out.evidence.insert(out.evidence.end(), good_ev.begin(), good_ev.end());
    } else if (!good_ev.empty()) {
        out.label = Label::good;
        out.evidence = std::move(good_ev);
    } else {
        out.label = Label::none;
    }
    return out;
}

MetricLabel none_label(int index, Metric metric) {
    return finalize(index, metric, {}, {});
}

}  // namespace

MetricLabel assess_understanding(const SegmentFeatures& f) {
    if (f.role != Role::provider) return none_label(f.index, Metric::understanding);
    std::vector<Evidence> good;
    for (const auto& v : f.question_verdicts) {
        if (v.label == "open") {
            good.push_back({"understanding.open_question", v.score});
            break;
        }
    }
    return finalize(f.index, Metric::understanding, std::move(good), {});
}

MetricLabel assess_empathy(const SegmentFeatures& f) {
    if (f.role != Role::provider) return none_label(f.index, Metric::empathy);
    std::vector<Evidence> good;
    for (const auto& v : f.empathy_verdicts) {
        if (v.label == "providing") {
            good.push_back({"empathy.providing", v.score});
            break;
        }
    }
    return finalize(f.index, Metric::empathy, std::move(good), {});
}

MetricLabel assess_emotion(const SegmentFeatures& f, const SegmentFeatures* prev_patient,
                           const std::optional<PauseMeasure>& pause, const RuleConfig& cfg) {
    if (f.role != Role::provider) return none_label(f.index, Metric::emotion);
    std::vector<Evidence> good, bad;
    if (prev_patient != nullptr) {
        const Polarity pp = emotion_polarity(prev_patient->scores, cfg.polarity_dead_zone);
        const Polarity sp = emotion_polarity(f.scores, cfg.polarity_dead_zone);
        if (sp != Polarity::neutral && sp == pp)
            good.push_back({"emotion.alignment",
                            std::string(sp == Polarity::positive ? "positive" : "negative")});
        const double patient_emotion = prev_patient->scores.rate("pos_emotion") +
                                       prev_patient->scores.rate("neg_emotion");
        const double patient_neg = prev_patient->scores.rate("neg_emotion");
        if (pause.has_value() && pause->confident) {
            if (pp == Polarity::negative && pause->gap_ms >= cfg.pause_good_ms)
                good.push_back({"emotion.pause", static_cast<double>(pause->gap_ms)});
            if (patient_neg >= cfg.high_neg_rate && pause->gap_ms < cfg.pause_good_ms)
                bad.push_back({"emotion.no_pause", static_cast<double>(pause->gap_ms)});
        }
        if (patient_emotion >= cfg.high_emotion_rate &&
            f.scores.rate("cog_process") >= cfg.high_cog_rate)
            bad.push_back({"emotion.intellectualize", f.scores.rate("cog_process")});
    }
    return finalize(f.index, Metric::emotion, std::move(good), std::move(bad));
}

MetricLabel assess_presence(const SegmentFeatures& f, const RuleConfig& cfg) {
    if (f.role != Role::provider) return none_label(f.index, Metric::presence);
    std::vector<Evidence> good, bad;
    if (f.interrupted) bad.push_back({"presence.interrupted", std::string("overlap")});
    if (f.prev_patient_index && f.max_similarity_to_prev_patient >= cfg.similarity_threshold)
        good.push_back({"presence.paraphrase", f.max_similarity_to_prev_patient});
    return finalize(f.index, Metric::presence, std::move(good), std::move(bad));
}

MetricLabel assess_clarity(const SegmentFeatures& f, const RuleConfig& cfg) {
    if (f.role != Role::provider) return none_label(f.index, Metric::clarity);
    std::vector<Evidence> good, bad;

    std::size_t jargon_tokens = 0;
    bool any_explained = false, all_explained = true;
    for (const auto& j : f.jargon) {
        jargon_tokens += j.match.token_count;
        if (j.explained)
            any_explained = true;
        else
            all_explained = false;
    }
    const double jargon_rate =
        f.scores.word_count > 0 ? 100.0 * static_cast<double>(jargon_tokens) /
                                      static_cast<double>(f.scores.word_count)
                                : 0.0;

    if (!f.jargon.empty() && jargon_rate >= cfg.jargon_overuse_rate && !any_explained)
        bad.push_back({"clarity.jargon_overuse", jargon_rate});
    if (f.scores.words_per_sentence > static_cast<double>(cfg.words_per_sentence_max))
        bad.push_back({"clarity.long_sentences", f.scores.words_per_sentence});

    if (bad.empty()) {
        const double pron_diff = f.scores.rate("pron_second") - f.scores.rate("pron_first");
        if (pron_diff > cfg.second_over_first_margin)
            good.push_back({"clarity.pronoun_focus", pron_diff});
        if (!f.jargon.empty() && all_explained)
            good.push_back({"clarity.jargon_explained",
                            static_cast<double>(f.jargon.size())});
    }
    return finalize(f.index, Metric::clarity, std::move(good), std::move(bad));
}

Assessment assess_conversation(const Conversation& conv, const ConversationFeatures& features,
                               const RuleConfig& config) {
    config.validate();
    if (features.segments.size() != conv.segments.size())
        throw std::invalid_argument("assess_conversation: missing prerequisite features");
    bool has_provider = false;
    for (const auto& s : conv.segments)
        if (s.role == Role::provider) has_provider = true;
    if (!has_provider) throw std::invalid_argument("no provider speech");

    Assessment out;
    out.conversation_id = conv.id;
    out.metadata = conv.metadata;
    out.config = config;
    out.flags.provider_speech_ratio = features.provider_speech_ratio;
    out.flags.ratio_pass = features.provider_speech_ratio < config.speech_ratio_max;
    out.flags.silence_encouraged = false;
    for (const auto& p : features.pauses)
        if (p.confident && p.gap_ms >= config.pause_good_ms) out.flags.silence_encouraged = true;

    for (const auto& f : features.segments) {
        const SegmentFeatures* prev_patient =
            f.prev_patient_index
                ? &features.segments[static_cast<std::size_t>(*f.prev_patient_index)]
                : nullptr;
        out.labels.push_back(assess_understanding(f));
        out.labels.push_back(assess_empathy(f));
        out.labels.push_back(assess_emotion(f, prev_patient, f.pause_after_prev_patient, config));
        out.labels.push_back(assess_presence(f, config));
        out.labels.push_back(assess_clarity(f, config));
    }
    return out;
}

namespace {

nlohmann::ordered_json config_to_json(const RuleConfig& c) {
    nlohmann::ordered_json j;
    j["pause_good_ms"] = c.pause_good_ms;
    j["words_per_sentence_max"] = c.words_per_sentence_max;
    j["speech_ratio_max"] = c.speech_ratio_max;
    j["similarity_threshold"] = c.similarity_threshold;
    j["high_emotion_rate"] = c.high_emotion_rate;
    j["high_neg_rate"] = c.high_neg_rate;
    j["polarity_dead_zone"] = c.polarity_dead_zone;
    j["high_cog_rate"] = c.high_cog_rate;
    j["jargon_overuse_rate"] = c.jargon_overuse_rate;
    j["second_over_first_margin"] = c.second_over_first_margin;
    return j;
}

RuleConfig config_from_json(const nlohmann::json& j) {
    RuleConfig c;
    c.pause_good_ms = j.at("pause_good_ms").get<std::int64_t>();
    c.words_per_sentence_max = j.at("words_per_sentence_max").get<int>();
    c.speech_ratio_max = j.at("speech_ratio_max").get<double>();
    c.similarity_threshold = j.at("similarity_threshold").get<double>();
    c.high_emotion_rate = j.at("high_emotion_rate").get<double>();
    c.high_neg_rate = j.at("high_neg_rate").get<double>();
    c.polarity_dead_zone = j.at("polarity_dead_zone").get<double>();
    c.high_cog_rate = j.at("high_cog_rate").get<double>();
    c.jargon_overuse_rate = j.at("jargon_overuse_rate").get<double>();
    c.second_over_first_margin = j.at("second_over_first_margin").get<double>();
    return c;
}

}  // namespace

std::string serialize_assessment(const Assessment& a) {
    nlohmann::ordered_json doc;
    doc["conversation_id"] = a.conversation_id;
    doc["metadata"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : a.metadata) doc["metadata"][k] = v;
    doc["config"] = config_to_json(a.config);
    doc["flags"] = {{"provider_speech_ratio", a.flags.provider_speech_ratio},
                    {"ratio_pass", a.flags.ratio_pass},
                    {"silence_encouraged", a.flags.silence_encouraged}};
    doc["labels"] = nlohmann::ordered_json::array();
    for (const auto& l : a.labels) {
        nlohmann::ordered_json jl;
        jl["segment"] = l.segment_index;
        jl["metric"] = metric_name(l.metric);
        jl["label"] = label_name(l.label);
        jl["evidence"] = nlohmann::ordered_json::array();
        for (const auto& e : l.evidence) {
            nlohmann::ordered_json je;
            je["rule"] = e.rule;
            if (std::holds_alternative<double>(e.value))
                je["value"] = std::get<double>(e.value);
            else
                je["value"] = std::get<std::string>(e.value);
            jl["evidence"].push_back(std::move(je));
        }
        doc["labels"].push_back(std::move(jl));
    }
    return doc.dump(2) + "\n";
}

Assessment parse_assessment(const std::string& bytes) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(bytes);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed assessment document: ") + e.what());
    }
    Assessment a;
    a.conversation_id = doc.at("conversation_id").get<std::string>();
    if (doc.contains("metadata"))
        for (auto it = doc["metadata"].begin(); it != doc["metadata"].end(); ++it)
            a.metadata[it.key()] = it.value().get<std::string>();
    a.config = config_from_json(doc.at("config"));
    a.flags.provider_speech_ratio = doc.at("flags").at("provider_speech_ratio").get<double>();
    a.flags.ratio_pass = doc.at("flags").at("ratio_pass").get<bool>();
    a.flags.silence_encouraged = doc.at("flags").at("silence_encouraged").get<bool>();
    for (const auto& jl : doc.at("labels")) {
        MetricLabel l;
        l.segment_index = jl.at("segment").get<int>();
        l.metric = metric_from_name(jl.at("metric").get<std::string>());
        const std::string lab = jl.at("label").get<std::string>();
        l.label = lab == "good" ? Label::good : lab == "bad" ? Label::bad : Label::none;
        for (const auto& je : jl.at("evidence")) {
            Evidence e;
            e.rule = je.at("rule").get<std::string>();
            if (je.at("value").is_number())
                e.value = je.at("value").get<double>();
            else
                e.value = je.at("value").get<std::string>();
            l.evidence.push_back(std::move(e));
        }
        a.labels.push_back(std::move(l));
    }
    return a;
}

}  // namespace commsense
