// Acceptance gate: one check per release criterion, each printing PASS/FAIL.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "helpers.hpp"

using namespace commsense;

namespace {

int failures = 0;

void report(int number, const std::string& name, bool ok, const std::string& detail = "") {
    std::printf("%s  criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", number, name.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++failures;
}

SynthSpec full_spec(double noise) {
    SynthSpec spec;
    for (const char* key : {"understanding.good", "empathy.good", "emotion.good", "emotion.bad",
                            "presence.good", "presence.bad", "clarity.good", "clarity.bad"})
        spec.counts[key] = 12;
    spec.noise = noise;
    spec.conversations = 24;  // 12 good-script + 12 bad-script
    return spec;
}

std::vector<std::tuple<Conversation, TruthTags, std::optional<EnergySeries>,
                       std::optional<IntervalSet>>>
to_inputs(std::vector<SynthBundle> bundles) {
    std::vector<std::tuple<Conversation, TruthTags, std::optional<EnergySeries>,
                           std::optional<IntervalSet>>>
        inputs;
    for (auto& b : bundles)
        inputs.emplace_back(std::move(b.conversation), std::move(b.truth), std::move(b.energy),
                            std::move(b.overlaps));
    return inputs;
}

bool cell_has_tags(const EvalCell& cell) {
    return cell.counts.tp + cell.counts.fn > 0;
}

// --- criterion 1: noise-free synthetic recovery --------------------------------
void criterion_1() {
    auto t0 = std::chrono::steady_clock::now();
    auto inputs = to_inputs(gen_synthetic(42, full_spec(0.0)));
    RunConfig cfg;
    Resources res = load_resources(cfg);
    auto pairs = assess_corpus_serial(inputs, res, cfg);
    auto report_data = evaluate_corpus_serial(pairs);
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    bool ok = report_data.conversations >= 20;
    int cells_checked = 0;
    std::ostringstream detail;
    for (const auto& cell : report_data.cells) {
        if (!cell_has_tags(cell)) continue;  // no rule exists for this cell
        ++cells_checked;
        bool perfect = cell.ba.defined && cell.ba.value == 1.0 && cell.prec.defined &&
                       cell.prec.value == 1.0 && cell.rec.defined && cell.rec.value == 1.0;
        if (!perfect) {
            ok = false;
            detail << metric_name(cell.metric) << "." << polarity_name(cell.polarity) << " ";
        }
    }
    if (cells_checked < 8) ok = false;
    if (seconds >= 5.0) ok = false;
    std::ostringstream d;
    d << report_data.conversations << " conversations, " << cells_checked
      << " tagged cells, " << seconds << " s serial" << (detail.str().empty() ? "" : "; imperfect: ")
      << detail.str();
    report(1, "synthetic-corpus recovery is exact (BA = precision = recall = 1.0)", ok, d.str());
}

// --- criterion 2: noise degrades recall but never precision --------------------
void criterion_2() {
    auto inputs = to_inputs(gen_synthetic(42, full_spec(0.30)));
    RunConfig cfg;
    Resources res = load_resources(cfg);
    auto report_data = evaluate_corpus_serial(assess_corpus_serial(inputs, res, cfg));
    bool ok = true;
    std::ostringstream detail;
    for (const auto& cell : report_data.cells) {
        if (!cell_has_tags(cell)) continue;
        bool recall_dropped = cell.rec.defined && cell.rec.value < 1.0;
        bool precision_intact = !cell.prec.defined || cell.prec.value == 1.0;
        if (!recall_dropped || !precision_intact) {
            ok = false;
            detail << metric_name(cell.metric) << "." << polarity_name(cell.polarity)
                   << "(rec=" << (cell.rec.defined ? cell.rec.value : -1)
                   << ",prec=" << (cell.prec.defined ? cell.prec.value : -1) << ") ";
        }
    }
    report(2, "30% noise: recall < 1.0 in every noised cell, precision stays 1.0", ok,
           detail.str());
}

// --- criterion 3: formula oracle -----------------------------------------------
void criterion_3() {
    bool ok = true;
    ConfusionCounts fixed;
    fixed.tp = 3;
    fixed.fn = 1;
    fixed.tn = 4;
    fixed.fp = 2;
    double expect = 0.5 * (3.0 / 4.0 + 4.0 / 6.0);
    if (std::abs(balanced_accuracy(fixed).value - expect) > 1e-15) ok = false;
    if (std::abs(balanced_accuracy(fixed).value - 0.7083333333333333) > 1e-12) ok = false;

    std::mt19937 rng(2024);
    std::uniform_int_distribution<long> count(0, 200);
    for (int i = 0; i < 1000 && ok; ++i) {
        ConfusionCounts c;
        c.tp = count(rng);
        c.fp = count(rng);
        c.tn = count(rng);
        c.fn = count(rng);
        auto check = [&](const Stat& got, long num, long den) {
            if (den == 0) return !got.defined;
            return got.defined &&
                   std::abs(got.value - static_cast<double>(num) / static_cast<double>(den)) <=
                       1e-12;
        };
        if (!check(precision(c), c.tp, c.tp + c.fp)) ok = false;
        if (!check(recall(c), c.tp, c.tp + c.fn)) ok = false;
        auto ba = balanced_accuracy(c);
        if (c.tp + c.fn == 0 || c.tn + c.fp == 0) {
            if (ba.defined) ok = false;
        } else {
            double ref = 0.5 * (static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn) +
                                static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp));
            if (!ba.defined || std::abs(ba.value - ref) > 1e-12) ok = false;
        }
    }
    report(3, "BA/precision/recall match an independent recomputation on 1000 matrices", ok);
}

// --- criterion 4: silence detector oracle ---------------------------------------
void criterion_4() {
    std::mt19937 rng(4242);
    bool ok = true;
    std::uniform_real_distribution<double> value(0.0, 10.0);
    std::uniform_int_distribution<int> pct(1, 99);
    for (int iter = 0; iter < 1000 && ok; ++iter) {
        EnergySeries s;
        s.frame_ms = 10 + static_cast<std::int64_t>(rng() % 200);
        s.start_offset_ms = static_cast<std::int64_t>(rng() % 3000);
        std::size_t n = iter == 0 ? 1 : 1 + rng() % 10000;
        bool all_equal = iter == 1;
        double fixed = value(rng);
        for (std::size_t i = 0; i < n; ++i) {
            double v = all_equal ? fixed : value(rng);
            if (!all_equal && rng() % 2) v = std::floor(v);  // force ties
            s.values.push_back(v);
        }
        int p = pct(rng);
        auto fast = detect_silence(s, p);

        // brute force: nearest-rank threshold, frame-by-frame scan
        std::vector<double> sorted = s.values;
        std::sort(sorted.begin(), sorted.end());
        std::size_t rank = static_cast<std::size_t>(
            std::ceil(p / 100.0 * static_cast<double>(n)));
        if (rank == 0) rank = 1;
        double threshold = sorted[rank - 1];
        std::vector<Interval> expect;
        std::size_t i = 0;
        while (i < n) {
            if (s.values[i] <= threshold) {
                std::size_t j = i;
                while (j < n && s.values[j] <= threshold) ++j;
                expect.push_back({s.start_offset_ms + static_cast<std::int64_t>(i) * s.frame_ms,
                                  s.start_offset_ms + static_cast<std::int64_t>(j) * s.frame_ms});
                i = j;
            } else {
                ++i;
            }
        }
        if (fast.intervals.size() != expect.size()) ok = false;
        for (std::size_t k = 0; ok && k < expect.size(); ++k)
            if (fast.intervals[k].start_ms != expect[k].start_ms ||
                fast.intervals[k].end_ms != expect[k].end_ms)
                ok = false;

        // scaling energies by 7.3 leaves intervals unchanged
        EnergySeries scaled = s;
        for (auto& v : scaled.values) v *= 7.3;
        auto rescaled = detect_silence(scaled, p);
        if (rescaled.intervals.size() != fast.intervals.size()) ok = false;
        for (std::size_t k = 0; ok && k < fast.intervals.size(); ++k)
            if (rescaled.intervals[k].start_ms != fast.intervals[k].start_ms ||
                rescaled.intervals[k].end_ms != fast.intervals[k].end_ms)
                ok = false;
    }
    report(4, "detect_silence equals the O(n^2) reference on 1000 series, scale-invariant", ok);
}

// --- criterion 5: threshold boundaries ------------------------------------------
void criterion_5() {
    bool ok = true;
    const std::string neg_patient = "I feel scared and worried about everything lately.";
    auto emotion_with_gap = [&](std::int64_t gap) {
        auto conv = testutil::make_conversation(
            "b", {{Role::patient, neg_patient, 1000, 3000},
                  {Role::provider, "I reviewed the chart notes from this morning.", gap, 3000}});
        return testutil::label_of(testutil::assess(conv), 1, Metric::emotion);
    };
    auto at = emotion_with_gap(10000);
    if (!(at.label == Label::good && testutil::has_rule(at, "emotion.pause"))) ok = false;
    auto below = emotion_with_gap(9999);
    if (testutil::has_rule(below, "emotion.pause")) ok = false;

    auto clarity_for = [&](int sentences, int extra_words) {
        std::string text;
        for (int i = 0; i < sentences; ++i) {
            int words = 15 + (i == sentences - 1 ? extra_words : 0);
            for (int w = 0; w < words; ++w) text += (text.empty() ? "word" : " word");
            text += ". ";
        }
        auto conv = testutil::make_conversation("c", {{Role::provider, text, 1000, 60000}});
        return testutil::label_of(testutil::assess(conv), 0, Metric::clarity);
    };
    // 15 x 15 words = exactly 15.0 -> no long-sentence evidence
    if (testutil::has_rule(clarity_for(15, 0), "clarity.long_sentences")) ok = false;
    // 241 words / 16 sentences = 15.0625 -> bad
    auto over = clarity_for(16, 1);
    if (!(over.label == Label::bad && testutil::has_rule(over, "clarity.long_sentences")))
        ok = false;

    auto ratio_flags = [&](std::int64_t provider_end) {
        Conversation conv;
        conv.id = "r";
        conv.duration_ms = 10000;
        conv.segments.push_back(
            testutil::make_segment(0, Role::provider, 0, provider_end, "Hello there."));
        conv.segments.push_back(
            testutil::make_segment(1, Role::patient, provider_end, 9500, "Hi and thanks."));
        auto f = testutil::features_for(conv, testutil::builtin_resources());
        return assess_conversation(conv, f, RuleConfig{}).flags;
    };
    if (ratio_flags(5000).ratio_pass) ok = false;        // exactly 0.5 fails < 0.5
    if (!ratio_flags(4990).ratio_pass) ok = false;       // 0.499 passes
    report(5, "threshold boundaries exact (pause 10000/9999, wps 15.0/15.0625, ratio 0.5/0.499)",
           ok);
}

// --- criterion 6: interruption mapping property ---------------------------------
void criterion_6() {
    std::mt19937 rng(6464);
    bool ok = true;
    for (int iter = 0; iter < 500 && ok; ++iter) {
        Conversation conv = testutil::random_conversation(rng, "ov-" + std::to_string(iter));
        bool has_provider = false;
        for (const auto& s : conv.segments)
            if (s.role == Role::provider) has_provider = true;
        if (!has_provider) {
            conv.segments[0].role = Role::provider;
        }
        IntervalSet overlaps;
        overlaps.kind = IntervalKind::overlap;
        std::int64_t clock = 0;
        int rows = static_cast<int>(rng() % 6);
        for (int i = 0; i < rows; ++i) {
            clock += static_cast<std::int64_t>(rng() % 9000);
            std::int64_t w = 1 + static_cast<std::int64_t>(rng() % 6000);
            overlaps.intervals.push_back({clock, clock + w});
            clock += w + 1;
        }
        auto feats = testutil::features_for(conv, testutil::builtin_resources(), std::nullopt,
                                            overlaps);
        auto assessment = assess_conversation(conv, feats, RuleConfig{});
        for (const auto& seg : conv.segments) {
            bool intersects = false;
            for (const auto& iv : overlaps.intervals)
                if (iv.start_ms < seg.end_ms && iv.end_ms > seg.start_ms) intersects = true;
            const auto& label = testutil::label_of(assessment, seg.index, Metric::presence);
            bool is_bad = label.label == Label::bad;
            if (seg.role == Role::provider) {
                if (intersects != is_bad) ok = false;
            } else if (is_bad) {
                ok = false;  // role gate
            }
        }
        // monotonicity: adding an interval inside a provider segment forces bad
        for (const auto& seg : conv.segments) {
            if (seg.role != Role::provider) continue;
            IntervalSet more = overlaps;
            more.intervals.push_back({seg.start_ms, seg.start_ms + 1});
            std::sort(more.intervals.begin(), more.intervals.end(),
                      [](const Interval& a, const Interval& b) {
                          return a.start_ms < b.start_ms;
                      });
            // merge any overlap introduced by the extra interval
            more = load_overlaps([&] {
                std::string csv = "start_ms,end_ms\n";
                for (const auto& iv : more.intervals)
                    csv += std::to_string(iv.start_ms) + "," + std::to_string(iv.end_ms) + "\n";
                return csv;
            }());
            more.kind = IntervalKind::overlap;
            auto f2 = testutil::features_for(conv, testutil::builtin_resources(), std::nullopt,
                                             more);
            auto a2 = assess_conversation(conv, f2, RuleConfig{});
            if (testutil::label_of(a2, seg.index, Metric::presence).label != Label::bad)
                ok = false;
            break;  // one segment per layout keeps the loop fast
        }
    }
    report(6, "presence-bad iff an overlap intersects the provider segment; monotone", ok);
}

// --- criterion 7: determinism & round trips --------------------------------------
void criterion_7() {
    bool ok = true;
    std::mt19937 rng(7777);

    // transcripts
    for (int i = 0; i < 200 && ok; ++i) {
        Conversation conv = testutil::random_conversation(rng, "t-" + std::to_string(i));
        std::string once = serialize_transcript(conv);
        if (serialize_transcript(parse_transcript(once)) != once) ok = false;
    }
    // truth files
    for (int i = 0; i < 200 && ok; ++i) {
        TruthTags t;
        t.conversation_id = "tr-" + std::to_string(i);
        t.script_class = (rng() % 2) ? ScriptClass::good_script : ScriptClass::bad_script;
        std::set<std::pair<int, int>> seen;
        for (int k = static_cast<int>(rng() % 8); k > 0; --k) {
            int seg = static_cast<int>(rng() % 30);
            int m = static_cast<int>(rng() % 5);
            if (seen.insert({seg, m}).second)
                t.tags.push_back({seg, all_metrics()[static_cast<std::size_t>(m)],
                                  (rng() % 2) ? TagPolarity::good : TagPolarity::bad});
        }
        std::string once = serialize_truth(t);
        if (serialize_truth(load_truth(once)) != once) ok = false;
    }
    // energy series
    std::uniform_real_distribution<double> value(0.0, 10.0);
    for (int i = 0; i < 200 && ok; ++i) {
        EnergySeries s;
        s.frame_ms = 10 + static_cast<std::int64_t>(rng() % 300);
        s.start_offset_ms = static_cast<std::int64_t>(rng() % 2000);
        for (int k = 1 + static_cast<int>(rng() % 60); k > 0; --k)
            s.values.push_back(value(rng));
        std::string once = serialize_energy(s);
        if (serialize_energy(parse_energy(once)) != once) ok = false;
    }
    // interval sets
    for (int i = 0; i < 200 && ok; ++i) {
        std::string csv = "start_ms,end_ms\n";
        std::int64_t clock = 0;
        for (int k = static_cast<int>(rng() % 9); k > 0; --k) {
            clock += static_cast<std::int64_t>(rng() % 5000);
            std::int64_t w = 1 + static_cast<std::int64_t>(rng() % 4000);
            csv += std::to_string(clock) + "," + std::to_string(clock + w) + "\n";
            clock += w;
        }
        auto once = load_overlaps(csv);
        std::string text = serialize_intervals(once);
        if (serialize_intervals(load_overlaps(text)) != text) ok = false;
    }
    // assessments (built through the real pipeline), plus analyze determinism
    for (int i = 0; i < 200 && ok; ++i) {
        Conversation conv = testutil::random_conversation(rng, "a-" + std::to_string(i));
        bool has_provider = false;
        for (const auto& s : conv.segments)
            if (s.role == Role::provider) has_provider = true;
        if (!has_provider) conv.segments[0].role = Role::provider;
        auto a1 = testutil::assess(conv);
        auto a2 = testutil::assess(conv);
        std::string once = serialize_assessment(a1);
        if (serialize_assessment(a2) != once) ok = false;
        if (serialize_assessment(parse_assessment(once)) != once) ok = false;
    }
    // evaluate determinism: repeated runs, byte-identical reports
    auto inputs = to_inputs(gen_synthetic(42, full_spec(0.0)));
    RunConfig cfg;
    Resources res = load_resources(cfg);
    std::string r1 = serialize_report(evaluate_corpus(assess_corpus(inputs, res, cfg)));
    std::string r2 = serialize_report(evaluate_corpus(assess_corpus(inputs, res, cfg)));
    std::string r3 = serialize_report(
        evaluate_corpus_serial(assess_corpus_serial(inputs, res, cfg)));
    if (r1 != r2 || r1 != r3) ok = false;

    report(7, "repeated runs byte-identical; all five formats round-trip x200", ok);
}

// --- criterion 8: external protocol conformance ----------------------------------
void criterion_8() {
    bool ok = true;
    ClassifyPayload payload;
    payload.text = "What worries you most?";

    // scenario 1: pass-through
    {
        ExternalClassifierConfig cfg;
        cfg.endpoint = std::string("python3 ") + COMMSENSE_MOCK_CLASSIFIER + " echo";
        cfg.timeout_ms = 5000;
        cfg.fallback = Fallback::error;
        ClassifierChannel channel(cfg);
        auto v = classify_external(Task::open_question, payload, cfg, channel);
        if (!(v.label == "open" && std::abs(v.score - 0.97) < 1e-12 &&
              v.source == VerdictSource::external))
            ok = false;
    }
    // scenario 2: timeout with fallback=baseline yields the baseline verdict
    {
        ExternalClassifierConfig cfg;
        cfg.endpoint = std::string("python3 ") + COMMSENSE_MOCK_CLASSIFIER + " slow";
        cfg.timeout_ms = 300;
        cfg.fallback = Fallback::baseline;
        ClassifierChannel channel(cfg);
        auto v = classify_external(Task::open_question, payload, cfg, channel);
        auto base = baseline_verdict(Task::open_question, payload);
        if (!(v.source == VerdictSource::baseline && v.label == base.label &&
              v.score == base.score))
            ok = false;
    }
    // scenario 3: out-of-range score is rejected
    {
        ExternalClassifierConfig cfg;
        cfg.endpoint = std::string("python3 ") + COMMSENSE_MOCK_CLASSIFIER + " badscore";
        cfg.timeout_ms = 5000;
        cfg.fallback = Fallback::error;
        ClassifierChannel channel(cfg);
        bool threw = false;
        try {
            classify_external(Task::open_question, payload, cfg, channel);
        } catch (const ProtocolError&) {
            threw = true;
        }
        if (!threw) ok = false;
    }
    report(8, "external protocol: pass-through, timeout fallback, score validation", ok);
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    if (failures == 0) {
        std::printf("ALL ACCEPTANCE CRITERIA PASS\n");
        return 0;
    }
    std::printf("%d ACCEPTANCE CRITERIA FAILED\n", failures);
    return 1;
}
