#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "commsense/transcript.hpp"

namespace commsense {

struct EnergySeries {
    std::int64_t frame_ms = 0;
    std::int64_t start_offset_ms = 0;
    std::vector<double> values;
};

struct Interval {
    std::int64_t start_ms = 0;
    std::int64_t end_ms = 0;
};

enum class IntervalKind { silence, overlap };

struct IntervalSet {
    IntervalKind kind = IntervalKind::silence;
    std::vector<Interval> intervals;  // sorted, non-overlapping, end > start
};

struct SegmentAnnotation {
    int segment_index = 0;
    std::vector<Interval> intersections;
    std::int64_t total_ms = 0;
    bool interrupted = false;  // only meaningful for overlap interval sets
};

struct PauseMeasure {
    int after_segment = 0;
    std::int64_t gap_ms = 0;
    double silence_coverage = 1.0;
    bool confident = true;
};

/// Adaptive percentile silence detection. The threshold is the nearest-rank
/// percentile of the frame values (sorted ascending, index ceil(p/100*n)-1);
/// maximal runs of frames with value <= threshold become intervals on the
/// conversation clock.
IntervalSet detect_silence(const EnergySeries& series, int percentile = 20);

EnergySeries parse_energy(const std::string& bytes);
std::string serialize_energy(const EnergySeries& series);

/// Interval CSV loader: merges touching/overlapping rows and sorts.
IntervalSet load_overlaps(const std::string& bytes);
std::string serialize_intervals(const IntervalSet& set);

/// Per-segment intersections with the interval set; an overlap interval
/// intersecting a segment's [start, end) marks it interrupted.
std::vector<SegmentAnnotation> map_to_segments(const IntervalSet& intervals,
                                               const Conversation& conv);

/// Gap after segment `index`, with coverage by detected silence when audio is
/// available. confident = no audio, or coverage >= 0.8.
PauseMeasure pause_after(const Conversation& conv, int index,
                         const std::optional<IntervalSet>& silence = std::nullopt);

}  // namespace commsense
