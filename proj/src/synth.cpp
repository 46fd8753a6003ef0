#include "commsense/synth.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <random>
#include <sstream>

#include "json.hpp"

namespace commsense {

namespace {

constexpr std::int64_t kFrameMs = 100;
constexpr std::int64_t kDefaultGapMs = 1500;

const std::vector<std::string>& patient_fillers() {
    static const std::vector<std::string> v = {
        "My family visited this morning.",
        "The nurse stopped by earlier today.",
        "I slept through most of the afternoon.",
    };
    return v;
}

const std::vector<std::string>& provider_fillers() {
    static const std::vector<std::string> v = {
        "I reviewed the chart notes from this morning.",
        "I will bring the forms for the visit later today.",
        "I spoke with the team about the schedule for tomorrow.",
    };
    return v;
}

struct InstanceKind {
    Metric metric;
    TagPolarity polarity;
};

struct Turn {
    Role role;
    std::string text;
    std::int64_t gap_before = kDefaultGapMs;  // gap to the previous segment end
    bool overlap = false;                     // emit an overlap interval inside this turn
};

struct Instance {
    InstanceKind kind;
    std::vector<Turn> turns;  // patient turn then provider turn; tag goes on the provider
    bool noised = false;
};

int count_words(const std::string& text) {
    int n = 0;
    bool in = false;
    for (char c : text) {
        bool tok = std::isalnum(static_cast<unsigned char>(c)) || c == '\'';
        if (tok && !in) ++n;
        in = tok;
    }
    return n;
}

Instance build_instance(const InstanceKind& kind, int ordinal, int filler_rotation) {
    const auto& pf = patient_fillers();
    const auto& vf = provider_fillers();
    const std::string pat_filler = pf[static_cast<std::size_t>(filler_rotation) % pf.size()];
    const bool even = ordinal % 2 == 0;

    Instance inst;
    inst.kind = kind;
    Turn pat{Role::patient, pat_filler, kDefaultGapMs, false};
    Turn prov{Role::provider, "", kDefaultGapMs, false};

    switch (kind.metric) {
        case Metric::understanding:
            prov.text = "What matters most in a typical day at home?";
            break;
        case Metric::empathy:
            prov.text = "I can see this is really hard for you.";
            break;
        case Metric::emotion:
            if (kind.polarity == TagPolarity::good) {
                if (even) {  // emotion direction alignment
                    pat.text = "I feel glad about the news today.";
                    prov.text = "I am glad the plan sounds hopeful today.";
                } else {  // confident pause after a negative statement
                    pat.text = "I feel scared and worried about everything lately.";
                    prov.text = "I hear the plans can wait until later.";
                    prov.gap_before = 11000;
                }
            } else {
                if (even) {  // intellectualized response to high emotion
                    pat.text = "I feel scared and worried about all of this.";
                    prov.text = "We think the reason is the process because the dose changed.";
                } else {  // no pause after highly negative statement
                    pat.text = "I feel scared and worried about all of this.";
                    prov.text = "I hear the plans can wait until later.";
                    prov.gap_before = 2000;
                }
            }
            break;
        case Metric::presence:
            if (kind.polarity == TagPolarity::good) {  // paraphrase / active listening
                pat.text = "My pain gets worse at night.";
                prov.text = "The pain is worse at night.";
            } else {  // interruption
                prov.text = vf[static_cast<std::size_t>(filler_rotation) % vf.size()];
                prov.overlap = true;
            }
            break;
        case Metric::clarity:
            if (kind.polarity == TagPolarity::good) {
                prov.text = even ? "You should take your medicine with food each morning."
                                 : "You have edema, which means swelling.";
            } else {
                prov.text =
                    even ? "The plan for the next several weeks involves daily walks around "
                           "the unit and a steady routine of meals and rest periods."
                         : "The biopsy showed a metastatic lesion near the stent.";
            }
            break;
    }
    inst.turns = {pat, prov};
    return inst;
}

void neutralize(Instance& inst, int filler_rotation) {
    const auto& pf = patient_fillers();
    const auto& vf = provider_fillers();
    inst.turns[0] = {Role::patient, pf[static_cast<std::size_t>(filler_rotation) % pf.size()],
                     kDefaultGapMs, false};
    inst.turns[1] = {Role::provider, vf[static_cast<std::size_t>(filler_rotation) % vf.size()],
                     kDefaultGapMs, false};
    inst.noised = true;
}

SynthBundle assemble_conversation(const std::string& id, ScriptClass script_class,
                                  const std::vector<Instance>& instances, int conv_ordinal) {
    SynthBundle bundle;
    Conversation& conv = bundle.conversation;
    conv.id = id;
    conv.metadata["script_id"] = id;
    conv.metadata["provider_role"] = conv_ordinal % 2 == 0 ? "physician" : "nurse";
    {
        std::ostringstream date;
        date << "2024-" << (conv_ordinal % 12 + 1 < 10 ? "0" : "") << conv_ordinal % 12 + 1
             << "-" << (conv_ordinal % 28 + 1 < 10 ? "0" : "") << conv_ordinal % 28 + 1;
        conv.metadata["session_date"] = date.str();
    }

    bundle.truth.conversation_id = id;
    bundle.truth.script_class = script_class;

    IntervalSet overlaps;
    overlaps.kind = IntervalKind::overlap;

    const auto& pf = patient_fillers();
    const auto& vf = provider_fillers();

    std::int64_t cursor = 0;
    int index = 0;
    auto emit = [&](Role role, const std::string& text, std::int64_t gap, bool overlap) {
        Segment seg;
        seg.index = index++;
        seg.role = role;
        seg.start_ms = cursor + gap;
        seg.end_ms = seg.start_ms + std::max<std::int64_t>(1200, count_words(text) * 400);
        seg.text = text;
        seg.sentences = split_sentences(text);
        cursor = seg.end_ms;
        if (overlap)
            overlaps.intervals.push_back({seg.start_ms + 200, seg.start_ms + 600});
        conv.segments.push_back(std::move(seg));
        return index - 1;
    };

    // opening neutral exchange: untagged negatives for every metric
    emit(Role::patient, pf[0], kDefaultGapMs, false);
    emit(Role::provider, vf[0], kDefaultGapMs, false);

    int rotation = 1;
    for (const auto& inst : instances) {
        emit(inst.turns[0].role, inst.turns[0].text, inst.turns[0].gap_before, false);
        int prov_index = emit(inst.turns[1].role, inst.turns[1].text,
                              inst.turns[1].gap_before, inst.turns[1].overlap);
        bundle.truth.tags.push_back({prov_index, inst.kind.metric, inst.kind.polarity});
        // neutral pair between instances keeps negatives plentiful
        emit(Role::patient, pf[static_cast<std::size_t>(rotation) % pf.size()], kDefaultGapMs,
             false);
        emit(Role::provider, vf[static_cast<std::size_t>(rotation) % vf.size()], kDefaultGapMs,
             false);
        ++rotation;
    }
    conv.duration_ms = cursor + 1000;

    if (!overlaps.intervals.empty()) bundle.overlaps = overlaps;

    // frame-energy series: loud inside segments, quiet in gaps, quiet tail
    // padding so the 20th-percentile threshold lands on the quiet value
    EnergySeries energy;
    energy.frame_ms = kFrameMs;
    energy.start_offset_ms = 0;
    std::size_t seg_i = 0;
    std::size_t quiet = 0;
    for (std::int64_t t = 0; t < conv.duration_ms; t += kFrameMs) {
        while (seg_i < conv.segments.size() && conv.segments[seg_i].end_ms <= t) ++seg_i;
        const bool loud = seg_i < conv.segments.size() &&
                          conv.segments[seg_i].start_ms <= t && t < conv.segments[seg_i].end_ms;
        if (loud) {
            energy.values.push_back(8.0 + static_cast<double>((t / kFrameMs) % 5) * 0.5);
        } else {
            energy.values.push_back(0.5);
            ++quiet;
        }
    }
    while (quiet * 4 < energy.values.size()) {  // quiet fraction >= 25%
        energy.values.push_back(0.5);
        ++quiet;
    }
    bundle.energy = energy;
    return bundle;
}

}  // namespace

SynthSpec parse_synth_spec(const std::string& bytes) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(bytes);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed synth spec: ") + e.what());
    }
    SynthSpec spec;
    for (auto it = doc.at("counts").begin(); it != doc.at("counts").end(); ++it)
        spec.counts[it.key()] = it.value().get<int>();
    if (doc.contains("noise")) spec.noise = doc["noise"].get<double>();
    if (doc.contains("conversations")) spec.conversations = doc["conversations"].get<int>();
    return spec;
}

std::vector<SynthBundle> gen_synthetic(std::uint64_t seed, const SynthSpec& spec) {
    if (spec.counts.empty()) throw std::invalid_argument("synthetic spec is empty");
    if (spec.noise < 0.0 || spec.noise > 1.0)
        throw std::invalid_argument("noise must be in [0,1]");

    std::vector<std::pair<InstanceKind, int>> cells;
    for (const auto& [key, count] : spec.counts) {
        auto dot = key.find('.');
        if (dot == std::string::npos)
            throw std::invalid_argument("spec key '" + key + "' must be metric.polarity");
        Metric m = metric_from_name(key.substr(0, dot));
        TagPolarity p = polarity_from_name(key.substr(dot + 1));
        if (p == TagPolarity::bad && (m == Metric::understanding || m == Metric::empathy))
            throw std::invalid_argument("no bad rule for " + metric_name(m));
        if (count <= 0) throw std::invalid_argument("spec count for '" + key + "' must be > 0");
        cells.push_back({{m, p}, count});
    }

    std::mt19937_64 rng(seed);

    // build all instances per cell, deterministically noising round(noise*n)
    // of them (at least one when noise > 0)
    std::vector<Instance> good_instances, bad_instances;
    int rotation = 0;
    for (const auto& [kind, count] : cells) {
        std::vector<Instance> batch;
        for (int i = 0; i < count; ++i)
            batch.push_back(build_instance(kind, i, rotation++));
        if (spec.noise > 0.0) {
            int k = static_cast<int>(spec.noise * count + 0.5);
            k = std::clamp(k, 1, count);
            std::vector<int> idx(static_cast<std::size_t>(count));
            std::iota(idx.begin(), idx.end(), 0);
            std::shuffle(idx.begin(), idx.end(), rng);
            for (int j = 0; j < k; ++j)
                neutralize(batch[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])],
                           rotation++);
        }
        auto& sink = kind.polarity == TagPolarity::good ? good_instances : bad_instances;
        sink.insert(sink.end(), batch.begin(), batch.end());
    }

    const bool has_good = !good_instances.empty();
    const bool has_bad = !bad_instances.empty();
    int n_good_convs = 0, n_bad_convs = 0;
    if (spec.conversations > 0) {
        if (has_good && has_bad) {
            n_good_convs = std::max(1, spec.conversations / 2);
            n_bad_convs = std::max(1, spec.conversations - n_good_convs);
        } else if (has_good) {
            n_good_convs = spec.conversations;
        } else {
            n_bad_convs = spec.conversations;
        }
    } else {
        n_good_convs = has_good ? 1 : 0;
        n_bad_convs = has_bad ? 1 : 0;
    }
    n_good_convs = std::min<int>(n_good_convs, std::max<int>(1, (int)good_instances.size()));
    n_bad_convs = std::min<int>(n_bad_convs, std::max<int>(1, (int)bad_instances.size()));

    std::vector<SynthBundle> out;
    int conv_ordinal = 0;
    auto distribute = [&](const std::vector<Instance>& instances, int n_convs,
                          ScriptClass script_class, const std::string& prefix) {
        if (n_convs <= 0) return;
        std::vector<std::vector<Instance>> buckets(static_cast<std::size_t>(n_convs));
        for (std::size_t i = 0; i < instances.size(); ++i)
            buckets[i % static_cast<std::size_t>(n_convs)].push_back(instances[i]);
        for (int c = 0; c < n_convs; ++c) {
            std::ostringstream id;
            id << prefix << "-" << (c < 10 ? "0" : "") << c;
            out.push_back(assemble_conversation(id.str(), script_class,
                                                buckets[static_cast<std::size_t>(c)],
                                                conv_ordinal++));
        }
    };
    distribute(good_instances, n_good_convs, ScriptClass::good_script, "synth-good");
    distribute(bad_instances, n_bad_convs, ScriptClass::bad_script, "synth-bad");
    return out;
}

}  // namespace commsense
