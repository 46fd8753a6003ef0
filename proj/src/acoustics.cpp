#include "commsense/acoustics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace commsense {

IntervalSet detect_silence(const EnergySeries& series, int percentile) {
    if (series.frame_ms <= 0) throw std::invalid_argument("detect_silence: frame_ms must be > 0");
    if (series.values.empty()) throw std::invalid_argument("detect_silence: empty series");
    if (percentile < 1 || percentile > 99)
        throw std::invalid_argument("detect_silence: percentile must be in [1,99]");

    std::vector<double> sorted = series.values;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    std::size_t rank = static_cast<std::size_t>(
        std::ceil(percentile / 100.0 * static_cast<double>(n)));
    if (rank == 0) rank = 1;
    const double threshold = sorted[rank - 1];

    IntervalSet out;
    out.kind = IntervalKind::silence;
    std::size_t i = 0;
    while (i < n) {
        if (series.values[i] <= threshold) {
            std::size_t j = i;
            while (j < n && series.values[j] <= threshold) ++j;
            out.intervals.push_back(
                {series.start_offset_ms + static_cast<std::int64_t>(i) * series.frame_ms,
                 series.start_offset_ms + static_cast<std::int64_t>(j) * series.frame_ms});
            i = j;
        } else {
            ++i;
        }
    }
    return out;
}

EnergySeries parse_energy(const std::string& bytes) {
    std::istringstream in(bytes);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("energy file: empty input");
    EnergySeries series;
    if (std::sscanf(line.c_str(), "# frame_ms=%lld start_offset_ms=%lld",
                    reinterpret_cast<long long*>(&series.frame_ms),
                    reinterpret_cast<long long*>(&series.start_offset_ms)) != 2)
        throw ParseError("energy file: malformed header line");
    if (series.frame_ms <= 0) throw ParseError("energy file: frame_ms must be > 0");
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::size_t pos = 0;
        double v;
        try {
            v = std::stod(line, &pos);
        } catch (const std::exception&) {
            throw ParseError("energy file line " + std::to_string(lineno) + ": not a number");
        }
        if (v < 0.0)
            throw ParseError("energy file line " + std::to_string(lineno) + ": negative value");
        series.values.push_back(v);
    }
    if (series.values.empty()) throw ParseError("energy file: no frame values");
    return series;
}

std::string serialize_energy(const EnergySeries& series) {
    std::ostringstream out;
    out << "# frame_ms=" << series.frame_ms << " start_offset_ms=" << series.start_offset_ms
        << "\n";
    out.precision(17);
    for (double v : series.values) out << v << "\n";
    return out.str();
}

IntervalSet load_overlaps(const std::string& bytes) {
    std::istringstream in(bytes);
    std::string line;
    std::vector<Interval> raw;
    int lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line.rfind("start_ms", 0) == 0) {
                header_seen = true;
                continue;
            }
            header_seen = true;  // header optional when data starts immediately
        }
        long long s, e;
        if (std::sscanf(line.c_str(), "%lld,%lld", &s, &e) != 2)
            throw ParseError("interval file line " + std::to_string(lineno) + ": malformed row");
        if (s < 0 || e <= s)
            throw ParseError("interval file line " + std::to_string(lineno) +
                             ": negative or inverted interval");
        raw.push_back({s, e});
    }
    std::sort(raw.begin(), raw.end(),
              [](const Interval& a, const Interval& b) { return a.start_ms < b.start_ms; });
    IntervalSet out;
    out.kind = IntervalKind::overlap;
    for (const auto& iv : raw) {
        if (!out.intervals.empty() && iv.start_ms <= out.intervals.back().end_ms)
            out.intervals.back().end_ms = std::max(out.intervals.back().end_ms, iv.end_ms);
        else
            out.intervals.push_back(iv);
    }
    return out;
}

std::string serialize_intervals(const IntervalSet& set) {
    std::ostringstream out;
    out << "start_ms,end_ms\n";
    for (const auto& iv : set.intervals) out << iv.start_ms << "," << iv.end_ms << "\n";
    return out.str();
}

std::vector<SegmentAnnotation> map_to_segments(const IntervalSet& intervals,
                                               const Conversation& conv) {
    std::vector<SegmentAnnotation> out;
    out.reserve(conv.segments.size());
    for (const auto& seg : conv.segments) {
        SegmentAnnotation ann;
        ann.segment_index = seg.index;
        for (const auto& iv : intervals.intervals) {
            std::int64_t s = std::max(iv.start_ms, seg.start_ms);
            std::int64_t e = std::min(iv.end_ms, seg.end_ms);
            if (s < e) {
                ann.intersections.push_back({s, e});
                ann.total_ms += e - s;
            }
        }
        ann.interrupted = intervals.kind == IntervalKind::overlap && ann.total_ms > 0;
        out.push_back(std::move(ann));
    }
    return out;
}

PauseMeasure pause_after(const Conversation& conv, int index,
                         const std::optional<IntervalSet>& silence) {
    if (index < 0 || static_cast<std::size_t>(index) + 1 >= conv.segments.size())
        throw std::invalid_argument("pause_after: index has no following segment");
    PauseMeasure m;
    m.after_segment = index;
    const std::int64_t gap_start = conv.segments[index].end_ms;
    const std::int64_t gap_end = conv.segments[index + 1].start_ms;
    m.gap_ms = gap_end - gap_start;
    if (!silence.has_value()) {
        m.silence_coverage = 1.0;
        m.confident = true;
        return m;
    }
    if (m.gap_ms == 0) {
        m.silence_coverage = 1.0;
    } else {
        std::int64_t covered = 0;
        for (const auto& iv : silence->intervals) {
            std::int64_t s = std::max(iv.start_ms, gap_start);
            std::int64_t e = std::min(iv.end_ms, gap_end);
            if (s < e) covered += e - s;
        }
        m.silence_coverage = static_cast<double>(covered) / static_cast<double>(m.gap_ms);
    }
    m.confident = m.silence_coverage >= 0.8;
    return m;
}

}  // namespace commsense
