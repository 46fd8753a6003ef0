#include "commsense/config.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

#include "commsense/lexicon.hpp"

namespace commsense {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_number(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("non-numeric value for config key '" + key + "'");
    }
    if (pos != value.size())
        throw std::invalid_argument("non-numeric value for config key '" + key + "'");
    return v;
}

struct Setter {
    std::string key;
    std::function<void(RunConfig&, const std::string&)> apply;
};

const std::vector<Setter>& setters() {
    auto num = [](const std::string& key, auto member_setter) {
        return Setter{key, [key, member_setter](RunConfig& c, const std::string& v) {
                          member_setter(c, parse_number(key, v));
                      }};
    };
    static const std::vector<Setter> list = {
        num("pause_good_ms",
            [](RunConfig& c, double v) { c.rules.pause_good_ms = static_cast<std::int64_t>(v); }),
        num("words_per_sentence_max",
            [](RunConfig& c, double v) { c.rules.words_per_sentence_max = static_cast<int>(v); }),
        num("speech_ratio_max", [](RunConfig& c, double v) { c.rules.speech_ratio_max = v; }),
        num("similarity_threshold",
            [](RunConfig& c, double v) { c.rules.similarity_threshold = v; }),
        num("high_emotion_rate", [](RunConfig& c, double v) { c.rules.high_emotion_rate = v; }),
        num("high_neg_rate", [](RunConfig& c, double v) { c.rules.high_neg_rate = v; }),
        num("polarity_dead_zone",
            [](RunConfig& c, double v) { c.rules.polarity_dead_zone = v; }),
        num("high_cog_rate", [](RunConfig& c, double v) { c.rules.high_cog_rate = v; }),
        num("jargon_overuse_rate",
            [](RunConfig& c, double v) { c.rules.jargon_overuse_rate = v; }),
        num("second_over_first_margin",
            [](RunConfig& c, double v) { c.rules.second_over_first_margin = v; }),
        num("silence_percentile",
            [](RunConfig& c, double v) { c.silence_percentile = static_cast<int>(v); }),
        num("external_timeout_ms",
            [](RunConfig& c, double v) { c.external_timeout_ms = static_cast<int>(v); }),
        {"lexicon", [](RunConfig& c, const std::string& v) { c.lexicon_path = v; }},
        {"jargon", [](RunConfig& c, const std::string& v) { c.jargon_path = v; }},
        {"jargon_exclusions",
         [](RunConfig& c, const std::string& v) { c.jargon_exclusions_path = v; }},
        {"stopwords", [](RunConfig& c, const std::string& v) { c.stopwords_path = v; }},
        {"cues", [](RunConfig& c, const std::string& v) { c.cues_path = v; }},
        {"external_endpoint",
         [](RunConfig& c, const std::string& v) { c.external_endpoint = v; }},
        {"external_fallback",
         [](RunConfig& c, const std::string& v) {
             if (v == "baseline")
                 c.external_fallback = Fallback::baseline;
             else if (v == "error")
                 c.external_fallback = Fallback::error;
             else
                 throw std::invalid_argument("external_fallback must be 'baseline' or 'error'");
         }},
    };
    return list;
}

void apply_one(RunConfig& cfg, const std::string& key, const std::string& value,
               const std::string& origin, bool strict) {
    for (const auto& s : setters()) {
        if (s.key == key) {
            s.apply(cfg, value);
            cfg.provenance[key] = origin;
            return;
        }
    }
    if (strict) throw std::invalid_argument("unknown config key '" + key + "'");
}

}  // namespace

CueConfig load_cues(const std::string& bytes) {
    CueConfig out;
    out.explanation_cues = default_explanation_cues();

    std::istringstream in(bytes);
    std::string line, current;
    std::map<std::string, std::vector<std::string>> sections;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line[0] == '%') {
            current = trim(line.substr(1));
            sections[current];
            continue;
        }
        if (current.empty()) throw ParseError("cue file: entry before any section header");
        std::istringstream parts(line);
        std::string item;
        while (std::getline(parts, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            std::transform(item.begin(), item.end(), item.begin(), [](unsigned char c) {
                return static_cast<char>(std::tolower(c));
            });
            sections[current].push_back(item);
        }
    }
    auto as_set = [](const std::vector<std::string>& v) {
        return std::set<std::string>(v.begin(), v.end());
    };
    if (sections.count("providing")) out.classify.providing_cues = sections["providing"];
    if (sections.count("seeking")) out.classify.seeking_cues = sections["seeking"];
    if (sections.count("explanation")) out.explanation_cues = sections["explanation"];
    if (sections.count("open_starters"))
        out.classify.open_starters = as_set(sections["open_starters"]);
    if (sections.count("polar_starters"))
        out.classify.polar_starters = as_set(sections["polar_starters"]);
    if (sections.count("abbreviations")) out.abbreviations = as_set(sections["abbreviations"]);
    return out;
}

RunConfig resolve_config(const std::optional<std::string>& file_text,
                         const std::vector<std::string>& flag_sets, bool strict) {
    RunConfig cfg;
    cfg.strict = strict;
    for (const auto& s : setters()) cfg.provenance[s.key] = "default";

    if (file_text) {
        std::istringstream in(*file_text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            auto eq = line.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("config file line " + std::to_string(lineno) +
                                            ": expected key = value");
            apply_one(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), "file", strict);
        }
    }
    for (const auto& kv : flag_sets) {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
        // flag overrides are always checked, independent of strict mode
        std::string key = trim(kv.substr(0, eq));
        bool known = false;
        for (const auto& s : setters()) known |= s.key == key;
        if (!known) throw std::invalid_argument("unknown config key '" + key + "'");
        apply_one(cfg, key, trim(kv.substr(eq + 1)), "flag", true);
    }
    cfg.rules.validate();
    if (cfg.silence_percentile < 1 || cfg.silence_percentile > 99)
        throw std::invalid_argument("silence_percentile must be in [1,99]");
    return cfg;
}

std::string config_show(const RunConfig& cfg) {
    std::ostringstream out;
    auto line = [&](const std::string& key, const auto& value) {
        auto it = cfg.provenance.find(key);
        out << key << " = " << value << "    # "
            << (it == cfg.provenance.end() ? "default" : it->second) << "\n";
    };
    line("pause_good_ms", cfg.rules.pause_good_ms);
    line("words_per_sentence_max", cfg.rules.words_per_sentence_max);
    line("speech_ratio_max", cfg.rules.speech_ratio_max);
    line("similarity_threshold", cfg.rules.similarity_threshold);
    line("high_emotion_rate", cfg.rules.high_emotion_rate);
    line("high_neg_rate", cfg.rules.high_neg_rate);
    line("polarity_dead_zone", cfg.rules.polarity_dead_zone);
    line("high_cog_rate", cfg.rules.high_cog_rate);
    line("jargon_overuse_rate", cfg.rules.jargon_overuse_rate);
    line("second_over_first_margin", cfg.rules.second_over_first_margin);
    line("silence_percentile", cfg.silence_percentile);
    line("lexicon", cfg.lexicon_path.empty() ? "<builtin>" : cfg.lexicon_path);
    line("jargon", cfg.jargon_path.empty() ? "<builtin>" : cfg.jargon_path);
    line("jargon_exclusions",
         cfg.jargon_exclusions_path.empty() ? "<builtin>" : cfg.jargon_exclusions_path);
    line("stopwords", cfg.stopwords_path.empty() ? "<builtin>" : cfg.stopwords_path);
    line("cues", cfg.cues_path.empty() ? "<builtin>" : cfg.cues_path);
    line("external_endpoint",
         cfg.external_endpoint.empty() ? "<none>" : cfg.external_endpoint);
    line("external_timeout_ms", cfg.external_timeout_ms);
    line("external_fallback",
         cfg.external_fallback == Fallback::baseline ? "baseline" : "error");
    return out.str();
}

}  // namespace commsense
