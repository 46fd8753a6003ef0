#include "commsense/cli.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "CLI11.hpp"

namespace fs = std::filesystem;

namespace commsense {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("file not found: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ParseError("cannot write file: " + path);
    out << content;
}

Resources load_resources(const RunConfig& cfg) {
    Resources res;
    res.lexicon = load_lexicon(cfg.lexicon_path.empty() ? builtin_lexicon_text()
                                                        : read_file(cfg.lexicon_path));
    const std::string jt =
        cfg.jargon_path.empty() ? builtin_jargon_text() : read_file(cfg.jargon_path);
    const std::string je = cfg.jargon_exclusions_path.empty()
                               ? builtin_jargon_exclusions_text()
                               : read_file(cfg.jargon_exclusions_path);
    res.jargon = load_jargon(jt, je);
    res.stopwords = load_stopwords(cfg.stopwords_path.empty() ? builtin_stopwords_text()
                                                              : read_file(cfg.stopwords_path));
    res.cues = cfg.cues_path.empty() ? CueConfig{} : load_cues(read_file(cfg.cues_path));
    if (cfg.cues_path.empty()) res.cues.explanation_cues = default_explanation_cues();
    return res;
}

namespace {

Classifiers make_classifiers(const Resources& res, const RunConfig& cfg,
                             ClassifierChannel* channel) {
    ClassifyConfig ccfg = res.cues.classify;
    ccfg.stopwords = res.stopwords;
    Classifiers base = baseline_classifiers(ccfg, res.stopwords);
    if (channel == nullptr) return base;
    ExternalClassifierConfig ecfg{cfg.external_endpoint, cfg.external_timeout_ms,
                                  cfg.external_fallback};
    auto join = [](const SentenceSpan& s) {
        std::string text;
        for (const auto& t : s.tokens) {
            if (!text.empty()) text += ' ';
            text += t;
        }
        if (s.is_question) text += '?';
        return text;
    };
    Classifiers ext = base;
    ext.open_question = [ecfg, ccfg, channel, join](const SentenceSpan& s) {
        ClassifyPayload p;
        p.text = join(s);
        return classify_external(Task::open_question, p, ecfg, *channel, ccfg);
    };
    ext.empathy = [ecfg, ccfg, channel, join](const SentenceSpan& s, Role r) {
        ClassifyPayload p;
        p.text = join(s);
        p.role = r;
        return classify_external(Task::empathy, p, ecfg, *channel, ccfg);
    };
    return ext;
}

struct Loaded {
    Conversation conv;
    TruthTags truth;
    std::optional<EnergySeries> energy;
    std::optional<IntervalSet> overlaps;
};

Assessment run_pipeline(const Conversation& conv, const Resources& res, const RunConfig& cfg,
                        const std::optional<EnergySeries>& energy,
                        const std::optional<IntervalSet>& overlaps,
                        ClassifierChannel* channel) {
    FeatureInputs inputs;
    inputs.lexicon = &res.lexicon;
    inputs.jargon = &res.jargon;
    inputs.explanation_cues = res.cues.explanation_cues;
    if (energy) inputs.silence = detect_silence(*energy, cfg.silence_percentile);
    inputs.overlaps = overlaps;
    auto features = compute_features(conv, inputs, make_classifiers(res, cfg, channel));
    return assess_conversation(conv, features, cfg.rules);
}

}  // namespace

Assessment analyze_conversation(const Conversation& conv, const Resources& res,
                                const RunConfig& cfg,
                                const std::optional<EnergySeries>& energy,
                                const std::optional<IntervalSet>& overlaps) {
    std::unique_ptr<ClassifierChannel> channel;
    if (!cfg.external_endpoint.empty())
        channel = std::make_unique<ClassifierChannel>(ExternalClassifierConfig{
            cfg.external_endpoint, cfg.external_timeout_ms, cfg.external_fallback});
    return run_pipeline(conv, res, cfg, energy, overlaps, channel.get());
}

std::string scorecard_markdown(const Assessment& a, const Conversation& conv) {
    std::ostringstream out;
    out << "# Communication scorecard: " << a.conversation_id << "\n\n";
    char ratio[32];
    std::snprintf(ratio, sizeof ratio, "%.3f", a.flags.provider_speech_ratio);
    out << "- Provider speech ratio: " << ratio << " ("
        << (a.flags.ratio_pass ? "pass" : "fail") << ", target < "
        << a.config.speech_ratio_max << ")\n";
    out << "- Silence encouraged: " << (a.flags.silence_encouraged ? "yes" : "no") << "\n\n";

    out << "| Metric | Good | Bad | None |\n|---|---|---|---|\n";
    for (Metric m : all_metrics()) {
        int g = 0, b = 0, n = 0;
        for (const auto& l : a.labels) {
            if (l.metric != m) continue;
            if (l.label == Label::good) ++g;
            else if (l.label == Label::bad) ++b;
            else ++n;
        }
        out << "| " << metric_name(m) << " | " << g << " | " << b << " | " << n << " |\n";
    }

    out << "\n## Evidence\n\n";
    for (const auto& l : a.labels) {
        if (l.label == Label::none) continue;
        const auto& seg = conv.segments[static_cast<std::size_t>(l.segment_index)];
        std::string excerpt = seg.text.substr(0, 60);
        if (seg.text.size() > 60) excerpt += "...";
        out << "- segment " << l.segment_index << " [" << metric_name(l.metric) << " "
            << label_name(l.label) << "]";
        for (const auto& e : l.evidence) {
            out << " " << e.rule;
            if (std::holds_alternative<double>(e.value)) {
                char buf[32];
                std::snprintf(buf, sizeof buf, "%.4g", std::get<double>(e.value));
                out << "=" << buf;
            } else {
                out << "=" << std::get<std::string>(e.value);
            }
        }
        out << " -- \"" << excerpt << "\"\n";
    }
    return out.str();
}

std::vector<EvalPair> assess_corpus_serial(
    const std::vector<std::tuple<Conversation, TruthTags, std::optional<EnergySeries>,
                                 std::optional<IntervalSet>>>& in,
    const Resources& res, const RunConfig& cfg) {
    std::vector<EvalPair> out(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) {
        const auto& [conv, truth, energy, overlaps] = in[i];
        out[i] = EvalPair{run_pipeline(conv, res, cfg, energy, overlaps, nullptr), truth, conv};
    }
    return out;
}

std::vector<EvalPair> assess_corpus(
    const std::vector<std::tuple<Conversation, TruthTags, std::optional<EnergySeries>,
                                 std::optional<IntervalSet>>>& in,
    const Resources& res, const RunConfig& cfg) {
    std::vector<EvalPair> out(in.size());
#ifdef COMMSENSE_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (long i = 0; i < static_cast<long>(in.size()); ++i) {
        const auto& [conv, truth, energy, overlaps] = in[static_cast<std::size_t>(i)];
        out[static_cast<std::size_t>(i)] =
            EvalPair{run_pipeline(conv, res, cfg, energy, overlaps, nullptr), truth, conv};
    }
    return out;
}

int cmd_analyze(const std::string& transcript_path, const std::optional<std::string>& energy_path,
                const std::optional<std::string>& overlaps_path, const RunConfig& cfg,
                std::ostream& err) {
    try {
        Resources res = load_resources(cfg);
        Conversation conv =
            parse_transcript(read_file(transcript_path), cfg.strict, res.cues.abbreviations);
        std::optional<EnergySeries> energy;
        if (energy_path) energy = parse_energy(read_file(*energy_path));
        std::optional<IntervalSet> overlaps;
        if (overlaps_path) overlaps = load_overlaps(read_file(*overlaps_path));

        Assessment a;
        try {
            a = analyze_conversation(conv, res, cfg, energy, overlaps);
        } catch (const std::invalid_argument& e) {
            err << "error: " << e.what() << "\n";
            return 1;
        }
        const std::string base = (fs::path(cfg.out_dir) / conv.id).string();
        write_file(base + ".assessment.json", serialize_assessment(a));
        write_file(base + ".scorecard.md", scorecard_markdown(a, conv));
        return 0;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

int cmd_evaluate(const std::string& corpus_dir, const RunConfig& cfg, std::ostream& err) {
    try {
        if (!fs::is_directory(corpus_dir)) {
            err << "error: not a directory: " << corpus_dir << "\n";
            return 2;
        }
        std::vector<std::string> transcripts, truths;
        for (const auto& entry : fs::directory_iterator(corpus_dir)) {
            const std::string name = entry.path().filename().string();
            if (name.size() > 16 && name.ends_with(".transcript.json"))
                transcripts.push_back(name.substr(0, name.size() - 16));
            else if (name.size() > 11 && name.ends_with(".truth.json"))
                truths.push_back(name.substr(0, name.size() - 11));
        }
        std::sort(transcripts.begin(), transcripts.end());
        std::sort(truths.begin(), truths.end());
        for (const auto& t : truths)
            if (!std::binary_search(transcripts.begin(), transcripts.end(), t)) {
                err << "error: truth file without transcript: " << t << ".truth.json\n";
                return 2;
            }

        Resources res = load_resources(cfg);
        std::vector<std::tuple<Conversation, TruthTags, std::optional<EnergySeries>,
                               std::optional<IntervalSet>>>
            inputs;
        std::set<std::string> ids;
        for (const auto& stem : transcripts) {
            const fs::path base = fs::path(corpus_dir) / stem;
            if (!std::binary_search(truths.begin(), truths.end(), stem)) {
                err << "error: transcript without truth file: " << stem << ".transcript.json\n";
                return 2;
            }
            Conversation conv = parse_transcript(read_file(base.string() + ".transcript.json"),
                                                 cfg.strict, res.cues.abbreviations);
            TruthTags truth = load_truth(read_file(base.string() + ".truth.json"));
            if (truth.conversation_id != conv.id)
                throw ParseError("truth/transcript id mismatch for " + stem);
            if (!ids.insert(conv.id).second) throw ParseError("duplicate conversation id " + conv.id);
            std::optional<EnergySeries> energy;
            if (fs::exists(base.string() + ".energy.csv"))
                energy = parse_energy(read_file(base.string() + ".energy.csv"));
            std::optional<IntervalSet> overlaps;
            if (fs::exists(base.string() + ".overlaps.csv"))
                overlaps = load_overlaps(read_file(base.string() + ".overlaps.csv"));
            inputs.emplace_back(std::move(conv), std::move(truth), std::move(energy),
                                std::move(overlaps));
        }
        if (inputs.empty()) {
            err << "error: empty corpus directory\n";
            return 2;
        }
        std::vector<EvalPair> pairs;
        EvalReport report;
        try {
            pairs = assess_corpus(inputs, res, cfg);
            report = evaluate_corpus(pairs);
        } catch (const std::invalid_argument& e) {
            err << "error: " << e.what() << "\n";
            return 1;
        }
        write_file((fs::path(cfg.out_dir) / "report.json").string(), serialize_report(report));
        write_file((fs::path(cfg.out_dir) / "report.md").string(), report_markdown(report));
        return 0;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

int cmd_trend(const std::string& assessment_dir, const std::string& group_by,
              const RunConfig& cfg, std::ostream& err) {
    try {
        if (!fs::is_directory(assessment_dir)) {
            err << "error: not a directory: " << assessment_dir << "\n";
            return 2;
        }
        std::vector<std::string> files;
        for (const auto& entry : fs::directory_iterator(assessment_dir)) {
            const std::string name = entry.path().filename().string();
            if (name.ends_with(".assessment.json")) files.push_back(entry.path().string());
        }
        std::sort(files.begin(), files.end());
        if (files.empty()) {
            err << "error: no assessment files in " << assessment_dir << "\n";
            return 2;
        }
        // (date, metric) -> counts
        std::map<std::pair<std::string, std::string>, std::array<long, 3>> groups;
        for (const auto& f : files) {
            Assessment a = parse_assessment(read_file(f));
            auto it = a.metadata.find(group_by);
            if (it == a.metadata.end())
                throw ParseError("assessment " + a.conversation_id + " missing metadata key '" +
                                 group_by + "'");
            for (const auto& l : a.labels) {
                auto& counts = groups[{it->second, metric_name(l.metric)}];
                if (l.label == Label::good) ++counts[0];
                else if (l.label == Label::bad) ++counts[1];
                else ++counts[2];
            }
        }
        std::ostringstream csv;
        csv << "date,metric,good_count,bad_count,none_count,good_rate\n";
        for (const auto& [key, counts] : groups) {
            const long total = counts[0] + counts[1] + counts[2];
            char rate[32];
            std::snprintf(rate, sizeof rate, "%.6f",
                          total > 0 ? static_cast<double>(counts[0]) / total : 0.0);
            csv << key.first << "," << key.second << "," << counts[0] << "," << counts[1] << ","
                << counts[2] << "," << rate << "\n";
        }
        write_file((fs::path(cfg.out_dir) / "trend.csv").string(), csv.str());
        return 0;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

int cmd_gen(std::uint64_t seed, const std::string& spec_path, const RunConfig& cfg,
            std::ostream& err) {
    try {
        SynthSpec spec = parse_synth_spec(read_file(spec_path));
        std::vector<SynthBundle> bundles;
        try {
            bundles = gen_synthetic(seed, spec);
        } catch (const std::invalid_argument& e) {
            err << "error: " << e.what() << "\n";
            return 1;
        }
        std::ostringstream manifest;
        manifest << "{\n  \"ids\": [";
        bool first = true;
        for (const auto& b : bundles) {
            const std::string base = (fs::path(cfg.out_dir) / b.conversation.id).string();
            write_file(base + ".transcript.json", serialize_transcript(b.conversation));
            write_file(base + ".truth.json", serialize_truth(b.truth));
            if (b.energy) write_file(base + ".energy.csv", serialize_energy(*b.energy));
            if (b.overlaps) write_file(base + ".overlaps.csv", serialize_intervals(*b.overlaps));
            manifest << (first ? "" : ", ") << '"' << b.conversation.id << '"';
            first = false;
        }
        manifest << "]\n}\n";
        write_file((fs::path(cfg.out_dir) / "manifest.json").string(), manifest.str());
        return 0;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"CommSense conversation assessment"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".";
    std::vector<std::string> sets;
    std::string external;
    bool strict = false;
    app.add_option("--config", config_path, "config file (key = value lines)");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--set", sets, "threshold override key=value")->take_all();
    app.add_option("--external-classifier", external, "external classifier endpoint");
    app.add_flag("--strict", strict, "strict parsing mode");

    std::string transcript_path, energy_path, overlaps_path;
    auto* analyze = app.add_subcommand("analyze", "assess one transcript");
    analyze->add_option("transcript", transcript_path, "transcript JSON path")->required();
    analyze->add_option("--energy", energy_path, "frame-energy CSV path");
    analyze->add_option("--overlaps", overlaps_path, "overlap interval CSV path");

    std::string corpus_dir;
    auto* evaluate = app.add_subcommand("evaluate", "evaluate a corpus directory");
    evaluate->add_option("corpus", corpus_dir, "directory of transcript+truth pairs")
        ->required();

    std::string trend_dir, group_by = "session_date";
    auto* trend = app.add_subcommand("trend", "emit longitudinal trend CSV");
    trend->add_option("assessments", trend_dir, "directory of assessment JSON files")
        ->required();
    trend->add_option("--group-by", group_by, "metadata key to group by");

    std::uint64_t seed = 0;
    std::string spec_path;
    auto* gen = app.add_subcommand("gen", "generate a synthetic corpus");
    gen->add_option("--seed", seed, "generator seed")->required();
    gen->add_option("--spec", spec_path, "synthetic spec JSON")->required();

    auto* config_cmd = app.add_subcommand("config", "configuration utilities");
    config_cmd->add_subcommand("show", "print resolved config");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 2;
    }

    RunConfig cfg;
    try {
        std::optional<std::string> file_text;
        if (!config_path.empty()) file_text = read_file(config_path);
        cfg = resolve_config(file_text, sets, strict);
        cfg.strict = strict;
        cfg.out_dir = out_dir;
        if (!external.empty()) cfg.external_endpoint = external;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    if (*analyze)
        return cmd_analyze(transcript_path,
                           energy_path.empty() ? std::nullopt
                                               : std::optional<std::string>(energy_path),
                           overlaps_path.empty() ? std::nullopt
                                                 : std::optional<std::string>(overlaps_path),
                           cfg, err);
    if (*evaluate) return cmd_evaluate(corpus_dir, cfg, err);
    if (*trend) return cmd_trend(trend_dir, group_by, cfg, err);
    if (*gen) return cmd_gen(seed, spec_path, cfg, err);
    if (*config_cmd) {
        out << config_show(cfg);
        return 0;
    }
    err << "error: no command\n";
    return 2;
}

}  // namespace commsense
