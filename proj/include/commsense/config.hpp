#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "commsense/classify.hpp"
#include "commsense/external.hpp"
#include "commsense/rules.hpp"

namespace commsense {

/// Cue/phrase configuration loaded from one sectioned file (lexicon format):
/// %providing, %seeking, %explanation, %open_starters, %polar_starters,
/// %abbreviations. Missing sections keep their defaults.
struct CueConfig {
    ClassifyConfig classify;
    std::vector<std::string> explanation_cues;
    std::set<std::string> abbreviations;
};

CueConfig load_cues(const std::string& bytes);

struct RunConfig {
    RuleConfig rules;
    int silence_percentile = 20;
    std::string lexicon_path, jargon_path, jargon_exclusions_path, stopwords_path, cues_path;
    std::string external_endpoint;
    int external_timeout_ms = 5000;
    Fallback external_fallback = Fallback::baseline;
    bool strict = false;
    std::string out_dir = ".";
    /// provenance per key: "default", "file" or "flag"
    std::map<std::string, std::string> provenance;
};

/// Precedence: flags > file > defaults. `flag_sets` are `key=value` pairs from
/// --set; `file_text` is the flat key-value config file contents.
RunConfig resolve_config(const std::optional<std::string>& file_text,
                         const std::vector<std::string>& flag_sets, bool strict = false);

std::string config_show(const RunConfig& cfg);

}  // namespace commsense
