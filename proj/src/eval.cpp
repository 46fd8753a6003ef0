#include "commsense/eval.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"

namespace commsense {

std::string script_class_name(ScriptClass c) {
    return c == ScriptClass::good_script ? "good_script" : "bad_script";
}

ScriptClass script_class_from_name(const std::string& name) {
    if (name == "good_script") return ScriptClass::good_script;
    if (name == "bad_script") return ScriptClass::bad_script;
    throw ParseError("unknown script_class '" + name + "'");
}

std::string polarity_name(TagPolarity p) { return p == TagPolarity::good ? "good" : "bad"; }

TagPolarity polarity_from_name(const std::string& name) {
    if (name == "good") return TagPolarity::good;
    if (name == "bad") return TagPolarity::bad;
    throw ParseError("unknown polarity '" + name + "'");
}

Stat balanced_accuracy(const ConfusionCounts& c) {
    Stat s;
    if (c.tp + c.fn == 0 || c.tn + c.fp == 0) return s;
    s.value = 0.5 * (static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn) +
                     static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp));
    s.defined = true;
    return s;
}

Stat precision(const ConfusionCounts& c) {
    Stat s;
    if (c.tp + c.fp == 0) return s;
    s.value = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
    s.defined = true;
    return s;
}

Stat recall(const ConfusionCounts& c) {
    Stat s;
    if (c.tp + c.fn == 0) return s;
    s.value = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    s.defined = true;
    return s;
}

TruthTags load_truth(const std::string& bytes) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(bytes);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed truth document: ") + e.what());
    }
    TruthTags out;
    try {
    out.conversation_id = doc.at("conversation_id").get<std::string>();
    out.script_class = script_class_from_name(doc.at("script_class").get<std::string>());
    std::set<std::pair<int, std::string>> seen;
    for (const auto& jt : doc.at("tags")) {
        TruthTag tag;
        tag.segment_index = jt.at("segment").get<int>();
        if (tag.segment_index < 0)
            throw ParseError("truth tag with out-of-range segment index " +
                             std::to_string(tag.segment_index));
        const std::string mname = jt.at("metric").get<std::string>();
        try {
            tag.metric = metric_from_name(mname);
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what());
        }
        tag.polarity = polarity_from_name(jt.at("polarity").get<std::string>());
        if (!seen.insert({tag.segment_index, mname}).second)
            throw ParseError("duplicate truth tag for (segment " +
                             std::to_string(tag.segment_index) + ", " + mname + ")");
        out.tags.push_back(tag);
    }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed truth document: ") + e.what());
    }
    return out;
}

std::string serialize_truth(const TruthTags& truth) {
    nlohmann::ordered_json doc;
    doc["conversation_id"] = truth.conversation_id;
    doc["script_class"] = script_class_name(truth.script_class);
    doc["tags"] = nlohmann::ordered_json::array();
    auto tags = truth.tags;
    std::sort(tags.begin(), tags.end(), [](const TruthTag& a, const TruthTag& b) {
        if (a.segment_index != b.segment_index) return a.segment_index < b.segment_index;
        return metric_name(a.metric) < metric_name(b.metric);
    });
    for (const auto& t : tags) {
        doc["tags"].push_back({{"segment", t.segment_index},
                               {"metric", metric_name(t.metric)},
                               {"polarity", polarity_name(t.polarity)}});
    }
    return doc.dump(2) + "\n";
}

ConfusionCounts confusion(const Assessment& assessment, const TruthTags& truth,
                          const Conversation& conv, Metric metric, TagPolarity polarity) {
    if (assessment.conversation_id != truth.conversation_id ||
        assessment.conversation_id != conv.id)
        throw std::invalid_argument("confusion: conversation id mismatch");

    std::map<int, Label> model;
    for (const auto& l : assessment.labels)
        if (l.metric == metric) model[l.segment_index] = l.label;

    std::map<int, TagPolarity> tagged;
    for (const auto& t : truth.tags) {
        if (static_cast<std::size_t>(t.segment_index) >= conv.segments.size())
            throw std::invalid_argument("confusion: truth tag segment index out of range");
        if (t.metric == metric) tagged[t.segment_index] = t.polarity;
    }

    const Label predicted_label = polarity == TagPolarity::good ? Label::good : Label::bad;
    ConfusionCounts c;
    c.metric = metric;
    c.polarity = polarity;
    for (const auto& seg : conv.segments) {
        if (seg.role != Role::provider) continue;
        auto tg = tagged.find(seg.index);
        const bool actual = tg != tagged.end() && tg->second == polarity;
        auto ml = model.find(seg.index);
        const bool predicted = ml != model.end() && ml->second == predicted_label;
        if (actual && predicted)
            ++c.tp;
        else if (actual && !predicted)
            ++c.fn;
        else if (!actual && predicted)
            ++c.fp;
        else
            ++c.tn;
    }
    return c;
}

namespace {

struct CellKey {
    ScriptClass sc;
    Metric metric;
    TagPolarity pol;
    bool operator<(const CellKey& o) const {
        if (sc != o.sc) return sc < o.sc;
        if (metric != o.metric) return metric < o.metric;
        return pol < o.pol;
    }
};

EvalReport assemble(const std::vector<EvalPair>& pairs,
                    const std::map<CellKey, ConfusionCounts>& summed) {
    EvalReport report;
    report.conversations = static_cast<int>(pairs.size());
    std::set<ScriptClass> classes;
    for (const auto& p : pairs) classes.insert(p.truth.script_class);

    for (ScriptClass sc : {ScriptClass::good_script, ScriptClass::bad_script}) {
        if (!classes.count(sc)) continue;
        for (Metric m : all_metrics()) {
            for (TagPolarity pol : {TagPolarity::good, TagPolarity::bad}) {
                auto it = summed.find({sc, m, pol});
                if (it == summed.end()) continue;
                EvalCell cell;
                cell.script_class = sc;
                cell.metric = m;
                cell.polarity = pol;
                cell.counts = it->second;
                cell.ba = balanced_accuracy(cell.counts);
                cell.prec = precision(cell.counts);
                cell.rec = recall(cell.counts);
                report.cells.push_back(cell);
            }
        }
    }
    for (Metric m : all_metrics()) {
        for (TagPolarity pol : {TagPolarity::good, TagPolarity::bad}) {
            ConfusionCounts total;
            total.metric = m;
            total.polarity = pol;
            bool any = false;
            for (ScriptClass sc : {ScriptClass::good_script, ScriptClass::bad_script}) {
                auto it = summed.find({sc, m, pol});
                if (it != summed.end()) {
                    total += it->second;
                    any = true;
                }
            }
            if (!any) continue;
            EvalCell cell;
            cell.metric = m;
            cell.polarity = pol;
            cell.counts = total;
            cell.ba = balanced_accuracy(total);
            cell.prec = precision(total);
            cell.rec = recall(total);
            report.rollup.push_back(cell);
        }
    }
    return report;
}

std::map<CellKey, ConfusionCounts> per_pair_counts(const EvalPair& p) {
    std::map<CellKey, ConfusionCounts> out;
    for (Metric m : all_metrics())
        for (TagPolarity pol : {TagPolarity::good, TagPolarity::bad})
            out[{p.truth.script_class, m, pol}] =
                confusion(p.assessment, p.truth, p.conversation, m, pol);
    return out;
}

}  // namespace

EvalReport evaluate_corpus_serial(const std::vector<EvalPair>& pairs) {
    if (pairs.empty()) throw std::invalid_argument("evaluate_corpus: empty corpus");
    std::vector<std::size_t> order(pairs.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return pairs[a].assessment.conversation_id < pairs[b].assessment.conversation_id;
    });
    std::map<CellKey, ConfusionCounts> summed;
    for (std::size_t idx : order)
        for (const auto& [key, c] : per_pair_counts(pairs[idx])) summed[key] += c;
    return assemble(pairs, summed);
}

EvalReport evaluate_corpus(const std::vector<EvalPair>& pairs) {
    if (pairs.empty()) throw std::invalid_argument("evaluate_corpus: empty corpus");
    std::vector<std::map<CellKey, ConfusionCounts>> partial(pairs.size());
#ifdef COMMSENSE_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (long i = 0; i < static_cast<long>(pairs.size()); ++i)
        partial[static_cast<std::size_t>(i)] = per_pair_counts(pairs[static_cast<std::size_t>(i)]);

    // deterministic reduction order: sort by conversation id before summing
    std::vector<std::size_t> order(pairs.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return pairs[a].assessment.conversation_id < pairs[b].assessment.conversation_id;
    });
    std::map<CellKey, ConfusionCounts> summed;
    for (std::size_t idx : order)
        for (const auto& [key, c] : partial[idx]) summed[key] += c;
    return assemble(pairs, summed);
}

namespace {

// Table 3 reference values (accuracy, precision, recall), carried as
// documentation annotations, never as targets.
nlohmann::ordered_json reference_table3() {
    nlohmann::ordered_json j;
    auto row = [](double a, double p, double r) {
        return nlohmann::ordered_json{{"accuracy", a}, {"precision", p}, {"recall", r}};
    };
    j["good_scripts"]["understanding"]["good"] = row(0.755, 0.733, 0.792);
    j["good_scripts"]["empathy"]["good"] = row(0.660, 0.679, 0.663);
    j["good_scripts"]["emotion"]["good"] = row(0.861, 0.733, 0.846);
    j["good_scripts"]["presence"]["good"] = row(0.862, 0.723, 0.703);
    j["good_scripts"]["clarity"]["good"] = row(0.776, 0.614, 0.567);
    j["bad_scripts"]["emotion"]["bad"] = row(0.729, 0.721, 0.678);
    j["bad_scripts"]["presence"]["bad"] = row(0.797, 0.835, 0.558);
    j["bad_scripts"]["clarity"]["bad"] = row(0.795, 0.664, 0.813);
    return j;
}

nlohmann::ordered_json cell_to_json(const EvalCell& cell, bool with_class) {
    nlohmann::ordered_json j;
    if (with_class) j["script_class"] = script_class_name(cell.script_class);
    j["metric"] = metric_name(cell.metric);
    j["polarity"] = polarity_name(cell.polarity);
    j["counts"] = {{"tp", cell.counts.tp},
                   {"fp", cell.counts.fp},
                   {"tn", cell.counts.tn},
                   {"fn", cell.counts.fn}};
    auto stat = [](const Stat& s) -> nlohmann::ordered_json {
        if (!s.defined) return nullptr;
        return s.value;
    };
    j["balanced_accuracy"] = stat(cell.ba);
    j["precision"] = stat(cell.prec);
    j["recall"] = stat(cell.rec);
    j["balanced_accuracy_defined"] = cell.ba.defined;
    j["precision_defined"] = cell.prec.defined;
    j["recall_defined"] = cell.rec.defined;
    return j;
}

std::string stat_str(const Stat& s) {
    if (!s.defined) return "--";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", s.value);
    return buf;
}

}  // namespace

std::string serialize_report(const EvalReport& report) {
    nlohmann::ordered_json doc;
    doc["conversations"] = report.conversations;
    doc["untagged_segments_count_as_negatives"] = true;
    doc["cells"] = nlohmann::ordered_json::array();
    for (const auto& c : report.cells) doc["cells"].push_back(cell_to_json(c, true));
    doc["rollup"] = nlohmann::ordered_json::array();
    for (const auto& c : report.rollup) doc["rollup"].push_back(cell_to_json(c, false));
    doc["paper_reference_table3"] = reference_table3();
    return doc.dump(2) + "\n";
}

std::string report_markdown(const EvalReport& report) {
    std::ostringstream out;
    out << "# Evaluation report\n\n";
    out << "Conversations: " << report.conversations << "\n\n";
    out << "Untagged provider segments count as negatives.\n\n";
    for (ScriptClass sc : {ScriptClass::good_script, ScriptClass::bad_script}) {
        bool any = false;
        for (const auto& c : report.cells)
            if (c.script_class == sc) any = true;
        if (!any) continue;
        out << "## " << (sc == ScriptClass::good_script ? "Good scripts" : "Bad scripts")
            << "\n\n";
        out << "| Metric | Polarity | Balanced accuracy | Precision | Recall | tp | fp | tn | fn |\n";
        out << "|---|---|---|---|---|---|---|---|---|\n";
        for (const auto& c : report.cells) {
            if (c.script_class != sc) continue;
            out << "| " << metric_name(c.metric) << " | " << polarity_name(c.polarity) << " | "
                << stat_str(c.ba) << " | " << stat_str(c.prec) << " | " << stat_str(c.rec)
                << " | " << c.counts.tp << " | " << c.counts.fp << " | " << c.counts.tn << " | "
                << c.counts.fn << " |\n";
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace commsense
