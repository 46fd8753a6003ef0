#pragma once

#include <cstdint>
#include <map>
#include <optional>

#include "commsense/acoustics.hpp"
#include "commsense/eval.hpp"

namespace commsense {

struct SynthSpec {
    /// Requested instance counts keyed "metric.polarity" (e.g. "emotion.bad").
    std::map<std::string, int> counts;
    double noise = 0.0;     // fraction of constructions perturbed to miss their rule
    int conversations = 0;  // 0 => one conversation per script class
};

struct SynthBundle {
    Conversation conversation;
    TruthTags truth;
    std::optional<EnergySeries> energy;
    std::optional<IntervalSet> overlaps;
};

/// Deterministic-under-seed corpus whose provider segments are constructed to
/// fire exactly the requested rules; truth tags match by construction. Noise
/// replaces a construction with neutral filler (the tag is kept), so noise can
/// only break rule satisfaction, never fabricate it.
std::vector<SynthBundle> gen_synthetic(std::uint64_t seed, const SynthSpec& spec);

SynthSpec parse_synth_spec(const std::string& bytes);

}  // namespace commsense
