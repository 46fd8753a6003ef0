#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "commsense/config.hpp"
#include "commsense/eval.hpp"
#include "commsense/synth.hpp"

namespace commsense {

/// Loaded analysis resources (lexicon, jargon, stopwords, cues), built-ins
/// unless the config names files.
struct Resources {
    Lexicon lexicon;
    JargonDict jargon;
    std::set<std::string> stopwords;
    CueConfig cues;
};

Resources load_resources(const RunConfig& cfg);

/// Full single-conversation pipeline: parse, featurize, assess.
Assessment analyze_conversation(const Conversation& conv, const Resources& res,
                                const RunConfig& cfg,
                                const std::optional<EnergySeries>& energy,
                                const std::optional<IntervalSet>& overlaps);

std::string scorecard_markdown(const Assessment& a, const Conversation& conv);

/// Corpus assessment with OpenMP over conversations; `assess_corpus_serial`
/// is the reference path the parallel one must match.
std::vector<EvalPair> assess_corpus(const std::vector<std::tuple<Conversation, TruthTags,
                                                                 std::optional<EnergySeries>,
                                                                 std::optional<IntervalSet>>>& in,
                                    const Resources& res, const RunConfig& cfg);
std::vector<EvalPair> assess_corpus_serial(
    const std::vector<std::tuple<Conversation, TruthTags, std::optional<EnergySeries>,
                                 std::optional<IntervalSet>>>& in,
    const Resources& res, const RunConfig& cfg);

int cmd_analyze(const std::string& transcript_path, const std::optional<std::string>& energy_path,
                const std::optional<std::string>& overlaps_path, const RunConfig& cfg,
                std::ostream& err);
int cmd_evaluate(const std::string& corpus_dir, const RunConfig& cfg, std::ostream& err);
int cmd_trend(const std::string& assessment_dir, const std::string& group_by,
              const RunConfig& cfg, std::ostream& err);
int cmd_gen(std::uint64_t seed, const std::string& spec_path, const RunConfig& cfg,
            std::ostream& err);

/// Entry point used by the binary; args exclude the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace commsense
