#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "helpers.hpp"

using namespace commsense;

namespace {

std::string mock_cmd(const std::string& scenario) {
    return std::string("python3 ") + COMMSENSE_MOCK_CLASSIFIER + " " + scenario;
}

ExternalClassifierConfig config_for(const std::string& scenario,
                                    Fallback fb = Fallback::baseline, int timeout_ms = 5000) {
    ExternalClassifierConfig cfg;
    cfg.endpoint = mock_cmd(scenario);
    cfg.timeout_ms = timeout_ms;
    cfg.fallback = fb;
    return cfg;
}

ClassifyPayload open_payload() {
    ClassifyPayload p;
    p.text = "What worries you most?";
    return p;
}

}  // namespace

TEST_CASE("external verdicts pass through unchanged") {
    auto cfg = config_for("echo");
    ClassifierChannel channel(cfg);
    auto v = classify_external(Task::open_question, open_payload(), cfg, channel);
    CHECK(v.label == "open");
    CHECK(v.score == doctest::Approx(0.97).epsilon(1e-12));
    CHECK(v.source == VerdictSource::external);

    ClassifyPayload emp;
    emp.text = "I can see this is really hard for you.";
    emp.role = Role::provider;
    auto e = classify_external(Task::empathy, emp, cfg, channel);
    CHECK(e.label == "providing");
    CHECK(e.source == VerdictSource::external);
}

TEST_CASE("ids increase and stale responses are skipped") {
    auto cfg = config_for("reorder");
    ClassifierChannel channel(cfg);
    for (int i = 0; i < 3; ++i) {
        auto v = classify_external(Task::open_question, open_payload(), cfg, channel);
        CHECK(v.label == "open");
        CHECK(v.source == VerdictSource::external);
    }
}

TEST_CASE("timeout with fallback=baseline yields the baseline verdict") {
    auto cfg = config_for("slow", Fallback::baseline, 300);
    ClassifierChannel channel(cfg);
    auto v = classify_external(Task::open_question, open_payload(), cfg, channel);
    CHECK(v.source == VerdictSource::baseline);
    CHECK(v.label == "open");  // baseline rule also says open
    CHECK(v.score == 1.0);
}

TEST_CASE("timeout with fallback=error rethrows") {
    auto cfg = config_for("slow", Fallback::error, 300);
    ClassifierChannel channel(cfg);
    CHECK_THROWS_AS(classify_external(Task::open_question, open_payload(), cfg, channel),
                    TimeoutError);
}

TEST_CASE("out-of-range score is a protocol error") {
    auto cfg = config_for("badscore", Fallback::error);
    ClassifierChannel channel(cfg);
    CHECK_THROWS_AS(classify_external(Task::open_question, open_payload(), cfg, channel),
                    ProtocolError);
    // with fallback=baseline the same failure degrades gracefully
    auto soft = config_for("badscore", Fallback::baseline);
    ClassifierChannel channel2(soft);
    auto v = classify_external(Task::open_question, open_payload(), soft, channel2);
    CHECK(v.source == VerdictSource::baseline);
}

TEST_CASE("label outside the task's label set is rejected") {
    auto cfg = config_for("badlabel", Fallback::error);
    ClassifierChannel channel(cfg);
    CHECK_THROWS_AS(classify_external(Task::empathy, open_payload(), cfg, channel),
                    ProtocolError);
}

TEST_CASE("unreachable endpoint falls back to baseline") {
    ExternalClassifierConfig cfg;
    cfg.endpoint = "false";  // exits immediately, stream closes
    cfg.timeout_ms = 1000;
    cfg.fallback = Fallback::baseline;
    ClassifierChannel channel(cfg);
    auto v = classify_external(Task::open_question, open_payload(), cfg, channel);
    CHECK(v.source == VerdictSource::baseline);
    CHECK(v.label == "open");
}

TEST_CASE("baseline_verdict mirrors the baseline classifiers") {
    auto v = baseline_verdict(Task::open_question, open_payload());
    CHECK(v.label == "open");
    CHECK(v.source == VerdictSource::baseline);

    ClassifyPayload sim;
    sim.text = "the pain is worse at night";
    sim.text_b = "my pain gets worse at night";
    auto s = baseline_verdict(Task::similarity, sim);
    CHECK(s.score == doctest::Approx(0.75).epsilon(1e-12));
}
