#pragma once

#include <memory>
#include <optional>
#include <string>

#include "commsense/classify.hpp"

namespace commsense {

enum class Fallback { baseline, error };

struct ExternalClassifierConfig {
    std::string endpoint;  // "tcp:<host>:<port>" or a subprocess command line
    int timeout_ms = 5000;
    Fallback fallback = Fallback::baseline;
};

struct ClassifyPayload {
    std::string text;
    std::optional<std::string> text_b;
    std::optional<Role> role;
};

struct ProtocolError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct TimeoutError : ProtocolError {
    using ProtocolError::ProtocolError;
};

/// Newline-delimited JSON request/response channel to an external classifier,
/// either over a spawned subprocess's standard streams or a TCP connection.
/// One in-flight request at a time; request ids strictly increase.
class ClassifierChannel {
public:
    explicit ClassifierChannel(const ExternalClassifierConfig& config);
    ~ClassifierChannel();
    ClassifierChannel(const ClassifierChannel&) = delete;
    ClassifierChannel& operator=(const ClassifierChannel&) = delete;

    /// Sends one request and awaits the matching response. Throws
    /// TimeoutError/ProtocolError; never applies fallback itself.
    ClassifierVerdict request(Task task, const ClassifyPayload& payload);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Baseline verdict computed directly from the payload text.
ClassifierVerdict baseline_verdict(Task task, const ClassifyPayload& payload,
                                   const ClassifyConfig& cfg = {});

/// Full contract: external verdict on success; on timeout or protocol error
/// the fallback policy decides between the baseline verdict and rethrowing.
ClassifierVerdict classify_external(Task task, const ClassifyPayload& payload,
                                    const ExternalClassifierConfig& config,
                                    ClassifierChannel& channel,
                                    const ClassifyConfig& baseline_cfg = {});

}  // namespace commsense
