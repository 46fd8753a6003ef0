#pragma once

#include <set>
#include <string>
#include <vector>

#include "commsense/transcript.hpp"

namespace commsense {

enum class Task { open_question, empathy, similarity };

std::string task_name(Task t);
Task task_from_name(const std::string& name);

enum class VerdictSource { baseline, external };

struct ClassifierVerdict {
    Task task = Task::open_question;
    std::string label;  // open/polar/none; seeking/providing/neutral; "" for similarity
    double score = 0.0;
    VerdictSource source = VerdictSource::baseline;
};

const std::set<std::string>& task_labels(Task t);

struct ClassifyConfig {
    std::set<std::string> open_starters = {"what", "how",  "why",  "tell",
                                           "describe", "where", "when"};
    std::set<std::string> polar_starters = {"do",  "does", "did",   "is",   "are",
                                            "was", "were", "can",   "could", "will",
                                            "would", "have", "has", "should", "may"};
    std::vector<std::string> providing_cues = {
        "i can see",     "that sounds",       "i understand", "i'm sorry",
        "we will get through", "it makes sense that"};
    std::vector<std::string> seeking_cues = {"i'm scared", "i don't know what to do",
                                             "nobody understands"};
    std::set<std::string> stopwords;  // empty => built-in defaults
};

/// Rule baseline: "open" for wh-/tell-/describe-led questions or a
/// "tell me more" statement; "polar" for auxiliary-led questions; else "none".
ClassifierVerdict detect_open_question(const SentenceSpan& sentence,
                                       const ClassifyConfig& cfg = {});

/// Phrase-cue baseline. Providing cues fire only for provider speech, seeking
/// cues only for patient speech.
ClassifierVerdict classify_empathy(const SentenceSpan& sentence, Role role,
                                   const ClassifyConfig& cfg = {});

std::set<std::string> load_stopwords(const std::string& bytes);

/// Cosine similarity of term-frequency vectors after stop-word removal.
/// Vectors emptied by stop-word removal yield 0.
double similarity(const std::vector<std::string>& a, const std::vector<std::string>& b,
                  const std::set<std::string>& stopwords);

}  // namespace commsense
