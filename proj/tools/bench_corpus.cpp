// Benchmark: parallel vs serial corpus assessment + evaluation on a synthetic
// corpus. Prints wall times and verifies the reports agree byte-for-byte.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "commsense/cli.hpp"

using Clock = std::chrono::steady_clock;

static double
ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

int main(int argc, char** argv) {
    int per_cell = argc > 1 ? std::atoi(argv[1]) : 40;
    int conversations = argc > 2 ? std::atoi(argv[2]) : 24;

    commsense::SynthSpec spec;
    for (const char* key : {"understanding.good", "empathy.good", "emotion.good", "emotion.bad",
                            "presence.good", "presence.bad", "clarity.good", "clarity.bad"})
        spec.counts[key] = per_cell;
    spec.conversations = conversations;

    auto bundles = commsense::gen_synthetic(7, spec);
    std::vector<std::tuple<commsense::Conversation, commsense::TruthTags,
                           std::optional<commsense::EnergySeries>,
                           std::optional<commsense::IntervalSet>>>
        inputs;
    for (auto& b : bundles)
        inputs.emplace_back(std::move(b.conversation), std::move(b.truth), std::move(b.energy),
                            std::move(b.overlaps));

    commsense::RunConfig cfg;
    commsense::Resources res = commsense::load_resources(cfg);

    auto t0 = Clock::now();
    auto serial_pairs = commsense::assess_corpus_serial(inputs, res, cfg);
    auto serial_report = commsense::evaluate_corpus_serial(serial_pairs);
    double serial_ms = ms_since(t0);

    t0 = Clock::now();
    auto parallel_pairs = commsense::assess_corpus(inputs, res, cfg);
    auto parallel_report = commsense::evaluate_corpus(parallel_pairs);
    double parallel_ms = ms_since(t0);

    const std::string a = commsense::serialize_report(serial_report);
    const std::string b = commsense::serialize_report(parallel_report);
    std::printf("conversations: %zu  segments/conv: %zu\n", inputs.size(),
                std::get<0>(inputs[0]).segments.size());
    std::printf("serial:   %9.2f ms\n", serial_ms);
    std::printf("parallel: %9.2f ms  (speedup %.2fx)\n", parallel_ms,
                parallel_ms > 0 ? serial_ms / parallel_ms : 0.0);
    std::printf("reports identical: %s\n", a == b ? "yes" : "NO");
    return a == b ? 0 : 1;
}
