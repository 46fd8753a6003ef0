#include "commsense/external.hpp"

#include <fcntl.h>
#include <netdb.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstring>

#include "json.hpp"

#include "commsense/lexicon.hpp"

namespace commsense {

namespace {

using Clock = std::chrono::steady_clock;

int remaining_ms(Clock::time_point deadline) {
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
    return static_cast<int>(std::max<std::int64_t>(0, left.count()));
}

}  // namespace

struct ClassifierChannel::Impl {
    int read_fd = -1;
    int write_fd = -1;
    pid_t child = -1;
    int timeout_ms = 5000;
    std::int64_t next_id = 1;
    std::string buffer;

    ~Impl() {
        if (write_fd >= 0) ::close(write_fd);
        if (read_fd >= 0 && read_fd != write_fd) ::close(read_fd);
        if (child > 0) {
            ::kill(child, SIGTERM);
            int status = 0;
            ::waitpid(child, &status, 0);
        }
    }

    void open_subprocess(const std::string& command) {
        int to_child[2], from_child[2];
        if (::pipe(to_child) != 0 || ::pipe(from_child) != 0)
            throw ProtocolError("failed to create pipes for external classifier");
        pid_t pid = ::fork();
        if (pid < 0) throw ProtocolError("failed to spawn external classifier");
        if (pid == 0) {
            ::dup2(to_child[0], STDIN_FILENO);
            ::dup2(from_child[1], STDOUT_FILENO);
            ::close(to_child[0]);
            ::close(to_child[1]);
            ::close(from_child[0]);
            ::close(from_child[1]);
            ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
            _exit(127);
        }
        ::close(to_child[0]);
        ::close(from_child[1]);
        write_fd = to_child[1];
        read_fd = from_child[0];
        child = pid;
    }

    void open_tcp(const std::string& host, const std::string& port) {
        addrinfo hints{};
        hints.ai_family = AF_UNSPEC;
        hints.ai_socktype = SOCK_STREAM;
        addrinfo* res = nullptr;
        if (::getaddrinfo(host.c_str(), port.c_str(), &hints, &res) != 0 || res == nullptr)
            throw ProtocolError("cannot resolve external classifier endpoint " + host + ":" +
                                port);
        int fd = -1;
        for (addrinfo* p = res; p != nullptr; p = p->ai_next) {
            fd = ::socket(p->ai_family, p->ai_socktype, p->ai_protocol);
            if (fd < 0) continue;
            if (::connect(fd, p->ai_addr, p->ai_addrlen) == 0) break;
            ::close(fd);
            fd = -1;
        }
        ::freeaddrinfo(res);
        if (fd < 0)
            throw ProtocolError("cannot connect to external classifier " + host + ":" + port);
        read_fd = write_fd = fd;
    }

    void send_line(const std::string& line, Clock::time_point deadline) {
        std::string data = line + "\n";
        std::size_t off = 0;
        while (off < data.size()) {
            pollfd pfd{write_fd, POLLOUT, 0};
            int pr = ::poll(&pfd, 1, remaining_ms(deadline));
            if (pr == 0) throw TimeoutError("timeout writing to external classifier");
            if (pr < 0) throw ProtocolError("poll failed on external classifier channel");
            ssize_t w = ::write(write_fd, data.data() + off, data.size() - off);
            if (w <= 0) throw ProtocolError("external classifier channel closed while writing");
            off += static_cast<std::size_t>(w);
        }
    }

    std::string read_line(Clock::time_point deadline) {
        for (;;) {
            auto nl = buffer.find('\n');
            if (nl != std::string::npos) {
                std::string line = buffer.substr(0, nl);
                buffer.erase(0, nl + 1);
                return line;
            }
            pollfd pfd{read_fd, POLLIN, 0};
            int pr = ::poll(&pfd, 1, remaining_ms(deadline));
            if (pr == 0) throw TimeoutError("timeout waiting for external classifier response");
            if (pr < 0) throw ProtocolError("poll failed on external classifier channel");
            char chunk[4096];
            ssize_t r = ::read(read_fd, chunk, sizeof chunk);
            if (r <= 0) throw ProtocolError("external classifier channel closed");
            buffer.append(chunk, static_cast<std::size_t>(r));
        }
    }
};

ClassifierChannel::ClassifierChannel(const ExternalClassifierConfig& config)
    : impl_(std::make_unique<Impl>()) {
    if (config.timeout_ms <= 0)
        throw std::invalid_argument("external classifier timeout_ms must be > 0");
    impl_->timeout_ms = config.timeout_ms;
    if (config.endpoint.rfind("tcp:", 0) == 0) {
        std::string rest = config.endpoint.substr(4);
        auto colon = rest.rfind(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("tcp endpoint must be tcp:<host>:<port>");
        impl_->open_tcp(rest.substr(0, colon), rest.substr(colon + 1));
    } else {
        impl_->open_subprocess(config.endpoint);
    }
}

ClassifierChannel::~ClassifierChannel() = default;

ClassifierVerdict ClassifierChannel::request(Task task, const ClassifyPayload& payload) {
    const std::int64_t id = impl_->next_id++;
    nlohmann::json req;
    req["id"] = id;
    req["task"] = task_name(task);
    req["text"] = payload.text;
    if (payload.text_b) req["text_b"] = *payload.text_b;
    if (payload.role) req["role"] = role_name(*payload.role);

    auto deadline = Clock::now() + std::chrono::milliseconds(impl_->timeout_ms);
    impl_->send_line(req.dump(), deadline);

    // responses are matched by id; skip stale ids from earlier requests
    for (;;) {
        std::string line = impl_->read_line(deadline);
        nlohmann::json resp;
        try {
            resp = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception&) {
            throw ProtocolError("malformed external classifier response");
        }
        if (!resp.is_object() || !resp.contains("id") || !resp["id"].is_number_integer())
            throw ProtocolError("external classifier response missing id");
        if (resp["id"].get<std::int64_t>() < id) continue;
        if (resp["id"].get<std::int64_t>() != id)
            throw ProtocolError("external classifier response id mismatch");
        if (!resp.contains("score") || !resp["score"].is_number())
            throw ProtocolError("external classifier response missing score");
        double score = resp["score"].get<double>();
        if (score < 0.0 || score > 1.0)
            throw ProtocolError("external classifier score out of range");
        std::string label;
        if (resp.contains("label")) {
            if (!resp["label"].is_string())
                throw ProtocolError("external classifier label must be a string");
            label = resp["label"].get<std::string>();
        }
        if (task != Task::similarity && !task_labels(task).count(label))
            throw ProtocolError("external classifier label '" + label +
                                "' outside task label set");
        ClassifierVerdict v;
        v.task = task;
        v.label = label;
        v.score = score;
        v.source = VerdictSource::external;
        return v;
    }
}

ClassifierVerdict baseline_verdict(Task task, const ClassifyPayload& payload,
                                   const ClassifyConfig& cfg) {
    auto spans = split_sentences(payload.text);
    SentenceSpan first = spans.empty() ? SentenceSpan{} : spans.front();
    switch (task) {
        case Task::open_question:
            return detect_open_question(first, cfg);
        case Task::empathy:
            return classify_empathy(first, payload.role.value_or(Role::provider), cfg);
        case Task::similarity: {
            ClassifierVerdict v;
            v.task = Task::similarity;
            v.source = VerdictSource::baseline;
            const auto stop =
                cfg.stopwords.empty() ? load_stopwords(builtin_stopwords_text()) : cfg.stopwords;
            std::vector<std::string> a, b;
            for (const auto& s : spans) a.insert(a.end(), s.tokens.begin(), s.tokens.end());
            if (payload.text_b)
                for (const auto& s : split_sentences(*payload.text_b))
                    b.insert(b.end(), s.tokens.begin(), s.tokens.end());
            v.score = (a.empty() || b.empty()) ? 0.0 : similarity(a, b, stop);
            return v;
        }
    }
    return {};
}

ClassifierVerdict classify_external(Task task, const ClassifyPayload& payload,
                                    const ExternalClassifierConfig& config,
                                    ClassifierChannel& channel,
                                    const ClassifyConfig& baseline_cfg) {
    try {
        return channel.request(task, payload);
    } catch (const ProtocolError&) {
        if (config.fallback == Fallback::error) throw;
        return baseline_verdict(task, payload, baseline_cfg);
    }
}

}  // namespace commsense
