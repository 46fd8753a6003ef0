#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "commsense/rules.hpp"

namespace commsense {

enum class ScriptClass { good_script, bad_script };
std::string script_class_name(ScriptClass c);
ScriptClass script_class_from_name(const std::string& name);

enum class TagPolarity { good, bad };
std::string polarity_name(TagPolarity p);
TagPolarity polarity_from_name(const std::string& name);

struct TruthTag {
    int segment_index = 0;
    Metric metric = Metric::understanding;
    TagPolarity polarity = TagPolarity::good;
};

struct TruthTags {
    std::string conversation_id;
    ScriptClass script_class = ScriptClass::good_script;
    std::vector<TruthTag> tags;  // at most one per (segment, metric)
};

struct ConfusionCounts {
    Metric metric = Metric::understanding;
    TagPolarity polarity = TagPolarity::good;
    long tp = 0, fp = 0, tn = 0, fn = 0;

    ConfusionCounts& operator+=(const ConfusionCounts& o) {
        tp += o.tp;
        fp += o.fp;
        tn += o.tn;
        fn += o.fn;
        return *this;
    }
};

/// A statistic that may be undefined when a denominator is zero.
struct Stat {
    double value = 0.0;
    bool defined = false;
};

Stat balanced_accuracy(const ConfusionCounts& c);
Stat precision(const ConfusionCounts& c);
Stat recall(const ConfusionCounts& c);

struct EvalCell {
    ScriptClass script_class = ScriptClass::good_script;
    Metric metric = Metric::understanding;
    TagPolarity polarity = TagPolarity::good;
    ConfusionCounts counts;
    Stat ba, prec, rec;
};

struct EvalReport {
    std::vector<EvalCell> cells;    // per (script_class, metric, polarity), fixed order
    std::vector<EvalCell> rollup;   // per (metric, polarity) across script classes
    int conversations = 0;
};

TruthTags load_truth(const std::string& bytes);
std::string serialize_truth(const TruthTags& truth);

/// Per-polarity confusion over provider-eligible segments: truth-positive when
/// the tag equals the polarity under test, predicted-positive when the model
/// label equals it. Untagged segments count as negatives.
ConfusionCounts confusion(const Assessment& assessment, const TruthTags& truth,
                          const Conversation& conv, Metric metric, TagPolarity polarity);

struct EvalPair {
    Assessment assessment;
    TruthTags truth;
    Conversation conversation;
};

/// Micro-averaged corpus evaluation: per-conversation confusions are summed
/// per (metric, polarity, script_class) before statistics.
EvalReport evaluate_corpus(const std::vector<EvalPair>& pairs);

/// Serial reference for evaluate_corpus; the public entry point may reduce in
/// parallel but must match this exactly.
EvalReport evaluate_corpus_serial(const std::vector<EvalPair>& pairs);

std::string serialize_report(const EvalReport& report);
std::string report_markdown(const EvalReport& report);

}  // namespace commsense
