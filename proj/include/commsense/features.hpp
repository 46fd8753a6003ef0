#pragma once

#include <functional>
#include <optional>

#include "commsense/acoustics.hpp"
#include "commsense/classify.hpp"
#include "commsense/lexicon.hpp"
#include "commsense/transcript.hpp"

namespace commsense {

/// Sentence-level classifier hooks; defaults are the deterministic baselines,
/// an external channel can be wired in behind the same signatures.
struct Classifiers {
    std::function<ClassifierVerdict(const SentenceSpan&)> open_question;
    std::function<ClassifierVerdict(const SentenceSpan&, Role)> empathy;
    std::function<double(const std::vector<std::string>&, const std::vector<std::string>&)>
        sentence_similarity;
};

Classifiers baseline_classifiers(const ClassifyConfig& cfg, std::set<std::string> stopwords);

struct JargonEvidence {
    JargonMatch match;
    bool explained = false;
};

struct SegmentFeatures {
    int index = 0;
    Role role = Role::provider;
    CategoryScores scores;
    std::vector<ClassifierVerdict> question_verdicts;  // one per sentence
    std::vector<ClassifierVerdict> empathy_verdicts;   // one per sentence
    std::vector<JargonEvidence> jargon;
    std::optional<int> prev_patient_index;
    double max_similarity_to_prev_patient = 0.0;  // provider segments only
    bool interrupted = false;
    /// Pause after the nearest preceding patient segment (for provider turns).
    std::optional<PauseMeasure> pause_after_prev_patient;
};

struct ConversationFeatures {
    std::vector<SegmentFeatures> segments;
    double provider_speech_ratio = 0.0;
    std::vector<PauseMeasure> pauses;  // one per inter-segment gap
};

struct FeatureInputs {
    const Lexicon* lexicon = nullptr;
    const JargonDict* jargon = nullptr;
    std::vector<std::string> explanation_cues;  // empty => defaults
    std::optional<IntervalSet> silence;   // detected silence, when audio given
    std::optional<IntervalSet> overlaps;  // upstream overlap intervals
    int big_word_letters = 7;
};

ConversationFeatures compute_features(const Conversation& conv, const FeatureInputs& inputs,
                                      const Classifiers& classifiers);

}  // namespace commsense
