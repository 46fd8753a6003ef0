#include "commsense/classify.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <sstream>

#include "commsense/lexicon.hpp"

namespace commsense {

namespace {

std::vector<std::string> phrase_tokens(const std::string& phrase) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : phrase) {
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '\'') {
            cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        } else if (!cur.empty()) {
            out.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

bool has_token_run(const std::vector<std::string>& tokens, const std::vector<std::string>& run) {
    if (run.empty() || run.size() > tokens.size()) return false;
    for (std::size_t i = 0; i + run.size() <= tokens.size(); ++i) {
        bool ok = true;
        for (std::size_t j = 0; j < run.size(); ++j)
            if (tokens[i + j] != run[j]) { ok = false; break; }
        if (ok) return true;
    }
    return false;
}

}  // namespace

std::string task_name(Task t) {
    switch (t) {
        case Task::open_question: return "open_question";
        case Task::empathy: return "empathy";
        case Task::similarity: return "similarity";
    }
    return "open_question";
}

Task task_from_name(const std::string& name) {
    if (name == "open_question") return Task::open_question;
    if (name == "empathy") return Task::empathy;
    if (name == "similarity") return Task::similarity;
    throw std::invalid_argument("unknown task '" + name + "'");
}

const std::set<std::string>& task_labels(Task t) {
    static const std::set<std::string> open = {"open", "polar", "none"};
    static const std::set<std::string> emp = {"seeking", "providing", "neutral"};
    static const std::set<std::string> sim = {""};
    switch (t) {
        case Task::open_question: return open;
        case Task::empathy: return emp;
        case Task::similarity: return sim;
    }
    return open;
}

ClassifierVerdict detect_open_question(const SentenceSpan& sentence,
                                       const ClassifyConfig& cfg) {
    ClassifierVerdict v;
    v.task = Task::open_question;
    v.label = "none";
    v.score = 0.0;
    if (sentence.tokens.empty()) return v;
    const std::string& first = sentence.tokens.front();
    if (sentence.is_question && cfg.open_starters.count(first)) {
        v.label = "open";
        v.score = 1.0;
    } else if (has_token_run(sentence.tokens, {"tell", "me", "more"})) {
        v.label = "open";
        v.score = 1.0;
    } else if (sentence.is_question && cfg.polar_starters.count(first)) {
        v.label = "polar";
        v.score = 1.0;
    }
    return v;
}

ClassifierVerdict classify_empathy(const SentenceSpan& sentence, Role role,
                                   const ClassifyConfig& cfg) {
    ClassifierVerdict v;
    v.task = Task::empathy;
    v.label = "neutral";
    v.score = 0.0;
    if (role == Role::provider) {
        for (const auto& cue : cfg.providing_cues) {
            if (has_token_run(sentence.tokens, phrase_tokens(cue))) {
                v.label = "providing";
                v.score = 1.0;
                return v;
            }
        }
    } else {
        for (const auto& cue : cfg.seeking_cues) {
            if (has_token_run(sentence.tokens, phrase_tokens(cue))) {
                v.label = "seeking";
                v.score = 1.0;
                return v;
            }
        }
    }
    return v;
}

std::set<std::string> load_stopwords(const std::string& bytes) {
    std::set<std::string> out;
    std::istringstream in(bytes);
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::string word;
        std::istringstream ws(line);
        while (ws >> word) {
            std::transform(word.begin(), word.end(), word.begin(), [](unsigned char c) {
                return static_cast<char>(std::tolower(c));
            });
            out.insert(word);
        }
    }
    return out;
}

double similarity(const std::vector<std::string>& a, const std::vector<std::string>& b,
                  const std::set<std::string>& stopwords) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("similarity: empty token list");
    std::map<std::string, int> fa, fb;
    for (const auto& t : a)
        if (!stopwords.count(t)) ++fa[t];
    for (const auto& t : b)
        if (!stopwords.count(t)) ++fb[t];
    if (fa.empty() || fb.empty()) return 0.0;
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (const auto& [t, c] : fa) {
        na += static_cast<double>(c) * c;
        auto it = fb.find(t);
        if (it != fb.end()) dot += static_cast<double>(c) * it->second;
    }
    for (const auto& [t, c] : fb) nb += static_cast<double>(c) * c;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace commsense
