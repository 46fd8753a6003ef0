#include "commsense/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace commsense {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

int letter_count(const std::string& token) {
    int n = 0;
    for (char c : token)
        if (std::isalpha(static_cast<unsigned char>(c))) ++n;
    return n;
}

std::vector<std::string> tokenize_phrase(const std::string& phrase) {
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

bool contains_token_run(const std::vector<std::string>& tokens,
                        const std::vector<std::string>& run) {
    if (run.empty() || run.size() > tokens.size()) return false;
    for (std::size_t i = 0; i + run.size() <= tokens.size(); ++i) {
        bool ok = true;
        for (std::size_t j = 0; j < run.size(); ++j)
            if (tokens[i + j] != run[j]) { ok = false; break; }
        if (ok) return true;
    }
    return false;
}

bool entry_matches(const std::string& entry, const std::string& token) {
    if (!entry.empty() && entry.back() == '*') {
        const std::size_t stem_len = entry.size() - 1;
        return token.size() >= stem_len && token.compare(0, stem_len, entry, 0, stem_len) == 0;
    }
    return entry == token;
}

}  // namespace

const std::vector<std::string>& Lexicon::required_categories() {
    static const std::vector<std::string> req = {
        "pos_emotion", "neg_emotion", "anger",      "anxiety",
        "sadness",     "cog_process", "pron_first", "pron_second"};
    return req;
}

bool Lexicon::token_matches(const std::string& category, const std::string& token) const {
    auto it = categories.find(category);
    if (it == categories.end()) return false;
    for (const auto& e : it->second)
        if (entry_matches(e, token)) return true;
    return false;
}

Lexicon load_lexicon(const std::string& bytes) {
    Lexicon lex;
    std::istringstream in(bytes);
    std::string line;
    std::string current;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line[0] == '%') {
            current = trim(line.substr(1));
            if (current.empty())
                throw ParseError("lexicon line " + std::to_string(lineno) +
                                 ": empty category name");
            lex.categories[current];  // category may legitimately stay empty of lines below
            continue;
        }
        if (current.empty())
            throw ParseError("lexicon line " + std::to_string(lineno) +
                             ": entry before any category header");
        std::istringstream parts(line);
        std::string item;
        while (std::getline(parts, item, ',')) {
            item = lower(trim(item));
            if (item.empty()) continue;
            auto star = item.find('*');
            if (star != std::string::npos && star != item.size() - 1)
                throw ParseError("lexicon line " + std::to_string(lineno) +
                                 ": wildcard must be terminal in '" + item + "'");
            auto& entries = lex.categories[current];
            if (std::find(entries.begin(), entries.end(), item) != entries.end())
                throw ParseError("lexicon line " + std::to_string(lineno) +
                                 ": duplicate entry '" + item + "' in category '" + current +
                                 "'");
            entries.push_back(item);
        }
    }
    for (const auto& req : Lexicon::required_categories())
        if (!lex.categories.count(req))
            throw ParseError("lexicon missing required category '" + req + "'");
    return lex;
}

std::string serialize_lexicon(const Lexicon& lex) {
    std::ostringstream out;
    for (const auto& [name, entries] : lex.categories) {
        out << '%' << name << '\n';
        for (const auto& e : entries) out << e << '\n';
    }
    return out.str();
}

CategoryScores score_categories(const std::vector<std::string>& tokens, const Lexicon& lex,
                                int sentence_count, int big_word_letters) {
    if (tokens.empty()) throw std::invalid_argument("score_categories: empty token list");
    CategoryScores out;
    out.word_count = static_cast<int>(tokens.size());
    out.words_per_sentence =
        static_cast<double>(tokens.size()) / static_cast<double>(std::max(1, sentence_count));
    int big = 0;
    for (const auto& t : tokens)
        if (letter_count(t) >= big_word_letters) ++big;
    out.big_word_rate = static_cast<double>(big) / static_cast<double>(tokens.size());
    for (const auto& [cat, entries] : lex.categories) {
        int matched = 0;
        for (const auto& t : tokens)
            if (lex.token_matches(cat, t)) ++matched;
        out.rates[cat] = 100.0 * matched / static_cast<double>(tokens.size());
    }
    double auth = out.rate("pron_first") + out.rate("pron_second") - out.rate("cog_process");
    out.authenticity_proxy = std::clamp(auth, 0.0, 100.0);
    return out;
}

JargonDict load_jargon(const std::string& terms_bytes, const std::string& exclusions_bytes) {
    auto parse = [](const std::string& bytes) {
        std::set<std::string> out;
        std::istringstream in(bytes);
        std::string line;
        while (std::getline(in, line)) {
            auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = lower(trim(line));
            if (!line.empty()) out.insert(line);
        }
        return out;
    };
    JargonDict dict;
    dict.terms = parse(terms_bytes);
    dict.exclusions = parse(exclusions_bytes);
    for (const auto& e : dict.exclusions) dict.terms.erase(e);
    return dict;
}

std::vector<JargonMatch> find_jargon(const std::vector<std::string>& tokens,
                                     const JargonDict& dict) {
    struct Candidate {
        std::size_t start, len;
        std::string term;
    };
    std::vector<Candidate> candidates;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        std::string joined;
        for (std::size_t n = 1; n <= 4 && i + n <= tokens.size(); ++n) {
            if (n > 1) joined += ' ';
            joined += tokens[i + n - 1];
            if (dict.terms.count(joined) && !dict.exclusions.count(joined))
                candidates.push_back({i, n, joined});
        }
    }
    std::stable_sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
        if (a.len != b.len) return a.len > b.len;
        return a.start < b.start;
    });
    std::vector<JargonMatch> chosen;
    auto overlaps = [&](const Candidate& c) {
        for (const auto& m : chosen) {
            std::size_t ce = c.start + c.len, me = m.token_index + m.token_count;
            if (c.start < me && m.token_index < ce) return true;
        }
        return false;
    };
    for (const auto& c : candidates)
        if (!overlaps(c)) chosen.push_back({c.term, c.start, c.len});
    std::sort(chosen.begin(), chosen.end(),
              [](const auto& a, const auto& b) { return a.token_index < b.token_index; });
    return chosen;
}

bool explanation_cue_present(const Segment& segment, const JargonMatch& match,
                             const std::vector<std::string>& cue_phrases) {
    // locate the sentence that holds the first token of the match
    std::size_t base = 0;
    std::size_t sent_idx = segment.sentences.size();
    for (std::size_t s = 0; s < segment.sentences.size(); ++s) {
        std::size_t size = segment.sentences[s].tokens.size();
        if (match.token_index < base + size) {
            sent_idx = s;
            break;
        }
        base += size;
    }
    if (sent_idx == segment.sentences.size()) return false;

    const auto& sent = segment.sentences[sent_idx];
    for (std::size_t s = sent_idx; s < std::min(sent_idx + 2, segment.sentences.size()); ++s) {
        for (const auto& cue : cue_phrases)
            if (contains_token_run(segment.sentences[s].tokens, tokenize_phrase(cue)))
                return true;
    }

    // parenthetical right after the term, inside the same sentence
    std::size_t local_last = match.token_index - base + match.token_count - 1;
    if (local_last < sent.token_offsets.size()) {
        std::size_t term_end = sent.token_offsets[local_last] + sent.tokens[local_last].size();
        for (std::size_t p = term_end; p < sent.char_end && p < segment.text.size(); ++p)
            if (segment.text[p] == '(') return true;
    }
    return false;
}

const std::vector<std::string>& default_explanation_cues() {
    static const std::vector<std::string> cues = {"which means", "that is", "in other words",
                                                  "meaning", "this is called"};
    return cues;
}

const std::string& builtin_lexicon_text() {
    static const std::string text = R"(# Starter word-category lexicon.
# Category headers are '%name'; entries are comma- or newline-separated;
# a terminal '*' matches any token beginning with the stem.

%pos_emotion
happy, hope*, glad, love*, relief, reliev*, comfort*, grateful, thankful
peaceful, optimis*, joy*, encourag*, reassur*, calm*, cheer*, delight*

%neg_emotion
sad*, scared, afraid, fear*, worr*, cry*, terrible, awful, horrible
anxious, anxiety, nervous, angry, anger, upset, miserable, hopeless
frighten*, depress*, lonely, grief, griev*, dread*, panic*, distress*

%anger
angry, anger, mad, furious, annoy*, frustrat*, irritat*, rage, resent*

%anxiety
anxious, anxiety, nervous, scared, afraid, fear*, worr*, tense, uneasy, panic*

%sadness
sad*, cry*, grief, griev*, hopeless, miserable, lonely, depress*, tear*, mourn*

%cog_process
think*, know*, because, reason*, consider*, understand*, cause*, effect*
therefore, analy*, conclud*, logic*, process*, realiz*, interpret*, assum*

%pron_first
i, me, my, mine, myself, we, us, our, ours, ourselves
i'm, i've, i'll, i'd, we're, we've, we'll, we'd

%pron_second
you, your, yours, yourself, yourselves, you're, you've, you'll, you'd
)";
    return text;
}

const std::string& builtin_jargon_text() {
    static const std::string text = R"(# Medical jargon terms, one per line; multi-word terms allowed.
edema
metastatic
metastatic lesion
lesion
prognosis
palliative
hypertension
analgesic
dyspnea
neutropenia
intubation
catheter
embolism
biopsy
oncology
anticoagulant
stent
hematoma
ischemia
stenosis
thrombosis
adjuvant
titration
nephropathy
tachycardia
scan
vein
radiation
opioid
cation
)";
    return text;
}

const std::string& builtin_jargon_exclusions_text() {
    static const std::string text = R"(# Commonly known terms filtered out before matching.
scan
vein
radiation
opioid
cation
)";
    return text;
}

const std::string& builtin_stopwords_text() {
    // articles, prepositions, conjunctions and possessives; verbs kept
    static const std::string text = R"(a
an
the
at
in
on
of
to
for
with
and
or
but
my
your
our
his
her
their
its
this
that
these
those
)";
    return text;
}

}  // namespace commsense
