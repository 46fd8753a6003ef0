#include "commsense/features.hpp"

#include <algorithm>

namespace commsense {

Classifiers baseline_classifiers(const ClassifyConfig& cfg, std::set<std::string> stopwords) {
    if (stopwords.empty()) stopwords = load_stopwords(builtin_stopwords_text());
    Classifiers c;
    c.open_question = [cfg](const SentenceSpan& s) { return detect_open_question(s, cfg); };
    c.empathy = [cfg](const SentenceSpan& s, Role r) { return classify_empathy(s, r, cfg); };
    c.sentence_similarity = [stopwords](const std::vector<std::string>& a,
                                        const std::vector<std::string>& b) {
        if (a.empty() || b.empty()) return 0.0;
        return similarity(a, b, stopwords);
    };
    return c;
}

ConversationFeatures compute_features(const Conversation& conv, const FeatureInputs& inputs,
                                      const Classifiers& classifiers) {
    if (inputs.lexicon == nullptr) throw std::invalid_argument("compute_features: no lexicon");
    ConversationFeatures out;
    out.provider_speech_ratio = speech_ratio(conv, Role::provider);

    for (std::size_t i = 0; i + 1 < conv.segments.size(); ++i)
        out.pauses.push_back(pause_after(conv, static_cast<int>(i), inputs.silence));

    std::vector<SegmentAnnotation> overlap_ann;
    if (inputs.overlaps) overlap_ann = map_to_segments(*inputs.overlaps, conv);

    const auto& cues =
        inputs.explanation_cues.empty() ? default_explanation_cues() : inputs.explanation_cues;

    std::optional<int> last_patient;
    for (const auto& seg : conv.segments) {
        SegmentFeatures f;
        f.index = seg.index;
        f.role = seg.role;
        auto tokens = seg.all_tokens();
        f.scores = score_categories(tokens, *inputs.lexicon,
                                    static_cast<int>(seg.sentences.size()),
                                    inputs.big_word_letters);
        for (const auto& sent : seg.sentences) {
            f.question_verdicts.push_back(classifiers.open_question(sent));
            f.empathy_verdicts.push_back(classifiers.empathy(sent, seg.role));
        }
        if (inputs.jargon) {
            for (const auto& m : find_jargon(tokens, *inputs.jargon))
                f.jargon.push_back({m, explanation_cue_present(seg, m, cues)});
        }
        f.prev_patient_index = last_patient;
        if (seg.role == Role::provider && last_patient) {
            const Segment& pat = conv.segments[static_cast<std::size_t>(*last_patient)];
            double best = 0.0;
            for (const auto& ps : seg.sentences)
                for (const auto& qs : pat.sentences)
                    best = std::max(best,
                                    classifiers.sentence_similarity(ps.tokens, qs.tokens));
            f.max_similarity_to_prev_patient = best;
            if (static_cast<std::size_t>(*last_patient) + 1 < conv.segments.size())
                f.pause_after_prev_patient = out.pauses[static_cast<std::size_t>(*last_patient)];
        }
        if (!overlap_ann.empty())
            f.interrupted = overlap_ann[static_cast<std::size_t>(seg.index)].interrupted;
        if (seg.role == Role::patient) last_patient = seg.index;
        out.segments.push_back(std::move(f));
    }
    return out;
}

}  // namespace commsense
