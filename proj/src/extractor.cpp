#include "rexincl/extractor.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <boost/regex.hpp>
#include <spdlog/spdlog.h>

#include "rexincl/errors.hpp"
#include "rexincl/parallel.hpp"

namespace rexincl {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && is_space(s[b])) ++b;
    while (e > b && is_space(s[e - 1])) --e;
    return std::string(s.substr(b, e - b));
}

std::string flatten_lines(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
            out += ' ';
            ++i;
        } else if (c == '\n' || c == '\r' || c == '\f') {
            out += ' ';
        } else {
            out += c;
        }
    }
    return out;
}

const auto kSyntax = boost::regex::perl | boost::regex::no_mod_m;
const auto kMatchFlags = boost::match_default | boost::match_not_dot_newline;

struct CompiledSub {
    std::string name;
    boost::regex re;
    std::vector<std::string> group_names;
};

struct CompiledRule {
    RuleId id = 0;
    std::optional<std::string> statistic_type;
    std::optional<bool> apa;
    boost::regex re;
    std::vector<std::string> group_names;
    std::vector<CompiledSub> subs;
};

std::string capture_value(const boost::smatch& m, const CompiledSub& sub) {
    if (std::find(sub.group_names.begin(), sub.group_names.end(), sub.name) != sub.group_names.end() &&
        m[sub.name].matched) {
        return m[sub.name].str();
    }
    if (m.size() > 1 && m[1].matched) return m[1].str();
    return m[0].str();
}

}  // namespace

std::string_view outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Statistic: return "statistic";
        case Outcome::Rejected: return "rejected";
        case Outcome::Unmatched: return "unmatched";
    }
    return "unmatched";
}

bool ExtractionResult::same_classification(const ExtractionResult& other) const {
    return outcome == other.outcome && statistic_type == other.statistic_type && apa == other.apa;
}

std::vector<Sentence> split_sentences(const Document& doc) {
    const std::string text = flatten_lines(doc.text);
    std::vector<std::string> pieces;
    std::size_t start = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '.') continue;
        std::size_t next = i + 1;
        if (next < text.size() && is_space(text[next])) ++next;
        if (next < text.size() && is_upper(text[next])) {
            pieces.push_back(text.substr(start, i + 1 - start));
            start = next;
            i = next - 1;
        }
    }
    pieces.push_back(text.substr(start));

    std::vector<Sentence> out;
    for (std::size_t k = 0; k < pieces.size(); ++k) {
        std::string s = trim(pieces[k]);
        if (std::any_of(s.begin(), s.end(), is_digit)) out.push_back({doc.doc_id, k, std::move(s)});
    }
    return out;
}

std::string to_boost_syntax(std::string_view p, std::vector<std::string>* group_names) {
    std::string out;
    out.reserve(p.size());
    auto read_name = [&](std::size_t from, char close) {
        const std::size_t end = p.find(close, from);
        return end == std::string_view::npos ? std::string_view{} : p.substr(from, end - from);
    };
    for (std::size_t i = 0; i < p.size(); ++i) {
        const char c = p[i];
        if (c == '\\') {
            out += c;
            if (i + 1 < p.size()) out += p[++i];
            continue;
        }
        if (c == '[') {
            // Copy the whole class untouched.
            std::size_t j = i + 1;
            if (j < p.size() && p[j] == '^') ++j;
            if (j < p.size() && p[j] == ']') ++j;
            while (j < p.size() && p[j] != ']') j += p[j] == '\\' ? 2 : 1;
            j = std::min(j, p.size() - 1);
            out.append(p.substr(i, j - i + 1));
            i = j;
            continue;
        }
        if (p.substr(i).starts_with("(?P<")) {
            const std::string_view name = read_name(i + 4, '>');
            if (group_names) group_names->emplace_back(name);
            out += "(?<";
            i += 3;
            continue;
        }
        if (p.substr(i).starts_with("(?P=")) {
            const std::string_view name = read_name(i + 4, ')');
            out += "\\k<";
            out += name;
            out += '>';
            i += 4 + name.size();
            continue;
        }
        if (p.substr(i).starts_with("(?<") && i + 3 < p.size() && p[i + 3] != '=' && p[i + 3] != '!') {
            if (group_names) group_names->emplace_back(read_name(i + 3, '>'));
            out += "(?<";
            i += 2;
            continue;
        }
        if (c == '{' && i + 1 < p.size() && p[i + 1] == ',') {
            std::size_t j = i + 2;
            while (j < p.size() && is_digit(p[j])) ++j;
            if (j > i + 2 && j < p.size() && p[j] == '}') {
                out += "{0";
                continue;  // the rest is copied as is
            }
        }
        if (c == '&') continue;
        out += c;
    }
    return out;
}

struct RuleMatcher::Impl {
    Precedence precedence;
    std::vector<CompiledRule> positive;
    std::vector<CompiledRule> negative;
    std::vector<SkippedRule> skipped;

    const CompiledRule* first_match(const std::vector<CompiledRule>& rules, const std::string& text,
                                    boost::smatch& m) const {
        for (const CompiledRule& r : rules) {
            try {
                if (boost::regex_search(text, m, r.re, kMatchFlags)) return &r;
            } catch (const std::runtime_error& e) {
                spdlog::warn("rule {} failed on a sentence: {}", r.id, e.what());
            }
        }
        return nullptr;
    }
};

RuleMatcher::RuleMatcher(const std::vector<Rule>& rules, Precedence precedence)
    : impl_(std::make_unique<Impl>()) {
    impl_->precedence = precedence;
    std::vector<const Rule*> ordered;
    for (const Rule& r : rules) ordered.push_back(&r);
    std::stable_sort(ordered.begin(), ordered.end(), [](const Rule* a, const Rule* b) { return a->id < b->id; });

    for (const Rule* r : ordered) {
        try {
            CompiledRule c;
            c.id = r->id;
            c.statistic_type = r->statistic_type;
            c.apa = r->apa;
            c.re = boost::regex(to_boost_syntax(r->pattern, &c.group_names), kSyntax);
            for (const SubRule& s : r->subrules) {
                CompiledSub sub;
                sub.name = s.name;
                sub.re = boost::regex(to_boost_syntax(s.pattern, &sub.group_names), kSyntax);
                c.subs.push_back(std::move(sub));
            }
            (r->polarity == Polarity::Positive ? impl_->positive : impl_->negative).push_back(std::move(c));
        } catch (const boost::regex_error& e) {
            spdlog::warn("rule {} skipped by the matcher: {}", r->id, e.what());
            impl_->skipped.push_back({r->id, e.what()});
        }
    }
}

RuleMatcher::~RuleMatcher() = default;
RuleMatcher::RuleMatcher(RuleMatcher&&) noexcept = default;
RuleMatcher& RuleMatcher::operator=(RuleMatcher&&) noexcept = default;

const std::vector<SkippedRule>& RuleMatcher::skipped() const { return impl_->skipped; }
std::size_t RuleMatcher::positive_count() const { return impl_->positive.size(); }
std::size_t RuleMatcher::negative_count() const { return impl_->negative.size(); }
Precedence RuleMatcher::precedence() const { return impl_->precedence; }

ExtractionResult RuleMatcher::classify(const Sentence& sentence) const {
    ExtractionResult res;
    res.doc_id = sentence.doc_id;
    res.index = sentence.index;
    res.text = sentence.text;

    boost::smatch m;
    auto try_positive = [&] {
        const CompiledRule* r = impl_->first_match(impl_->positive, sentence.text, m);
        if (!r) return false;
        res.outcome = Outcome::Statistic;
        res.matched_rule_id = r->id;
        res.statistic_type = r->statistic_type.value_or("other");
        res.apa = r->apa.value_or(false);
        std::map<std::string, std::string> values;
        for (const std::string& name : r->group_names) {
            if (m[name].matched) values[name] = m[name].str();
        }
        const std::string span = m[0].str();
        for (const CompiledSub& sub : r->subs) {
            boost::smatch sm;
            try {
                if (boost::regex_search(span, sm, sub.re, kMatchFlags)) values[sub.name] = capture_value(sm, sub);
            } catch (const std::runtime_error& e) {
                spdlog::warn("sub-rule {} of rule {} failed: {}", sub.name, r->id, e.what());
            }
        }
        res.values = std::move(values);
        return true;
    };
    auto try_negative = [&] {
        const CompiledRule* r = impl_->first_match(impl_->negative, sentence.text, m);
        if (!r) return false;
        res.outcome = Outcome::Rejected;
        res.matched_rule_id = r->id;
        return true;
    };

    if (impl_->precedence == Precedence::PositiveFirst) {
        if (try_positive() || try_negative()) return res;
    } else {
        if (try_negative() || try_positive()) return res;
    }
    res.outcome = Outcome::Unmatched;
    return res;
}

std::size_t CorpusReport::apa_total() const {
    std::size_t n = 0;
    for (const auto& [_, c] : by_type) n += c.apa;
    return n;
}

CorpusReport tally(const std::vector<ExtractionResult>& results) {
    CorpusReport report;
    for (std::string_view t : kStatisticTypes) report.by_type[std::string(t)];
    std::set<std::string> docs;
    for (const ExtractionResult& r : results) {
        docs.insert(r.doc_id);
        ++report.sentences;
        switch (r.outcome) {
            case Outcome::Statistic: {
                ++report.total_statistics;
                TypeCounts& c = report.by_type[r.statistic_type.value_or("other")];
                ++(r.apa.value_or(false) ? c.apa : c.non_apa);
                break;
            }
            case Outcome::Rejected: ++report.rejected; break;
            case Outcome::Unmatched: ++report.unmatched; break;
        }
    }
    report.documents = docs.size();
    if (report.total_statistics > 0) {
        const double total = static_cast<double>(report.total_statistics);
        const double apa = static_cast<double>(report.apa_total());
        report.apa_share_with_anova_no_r = apa / total * 100.0;
        report.apa_share_without_anova_no_r =
            (apa - static_cast<double>(report.by_type["anova-no-r"].apa)) / total * 100.0;
    }
    return report;
}

CorpusRun run_corpus(const std::vector<Document>& corpus, const RuleMatcher& matcher, unsigned jobs) {
    std::vector<std::vector<ExtractionResult>> per_doc(corpus.size());
    parallel_for(corpus.size(), jobs, [&](std::size_t i) {
        for (const Sentence& s : split_sentences(corpus[i])) per_doc[i].push_back(matcher.classify(s));
    });
    CorpusRun run;
    for (auto& rs : per_doc) {
        for (auto& r : rs) run.results.push_back(std::move(r));
    }
    run.report = tally(run.results);
    run.report.documents = corpus.size();
    return run;
}

std::vector<ExtractionResult> sample(const std::vector<ExtractionResult>& results, std::size_t n,
                                     std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::map<std::string, std::vector<std::size_t>> by_type;
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (results[i].outcome == Outcome::Statistic) by_type[results[i].statistic_type.value_or("other")].push_back(i);
    }
    std::vector<std::size_t> chosen;
    for (std::string_view t : kStatisticTypes) {
        auto it = by_type.find(std::string(t));
        if (it == by_type.end()) continue;
        std::sample(it->second.begin(), it->second.end(), std::back_inserter(chosen), n, rng);
    }
    std::sort(chosen.begin(), chosen.end());
    std::vector<ExtractionResult> out;
    out.reserve(chosen.size());
    for (std::size_t i : chosen) out.push_back(results[i]);
    return out;
}

Corpus load_corpus(const std::filesystem::path& path) {
    namespace fs = std::filesystem;
    Corpus corpus;
    std::set<std::string> ids;
    auto add = [&](Document doc, std::size_t lineno) {
        if (!ids.insert(doc.doc_id).second) throw FormatError("duplicate doc_id " + doc.doc_id, lineno);
        corpus.documents.push_back(std::move(doc));
    };

    if (fs::is_directory(path)) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::recursive_directory_iterator(path)) {
            if (entry.is_regular_file()) files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        for (const fs::path& f : files) {
            std::ifstream in(f, std::ios::binary);
            std::ostringstream buf;
            if (!in || !(buf << in.rdbuf())) {
                spdlog::warn("skipping unreadable document {}", f.string());
                ++corpus.skipped;
                continue;
            }
            add({fs::relative(f, path).generic_string(), buf.str()}, 0);
        }
        return corpus;
    }

    std::ifstream in(path);
    if (!in) throw Error("cannot open corpus " + path.string());
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        try {
            const auto j = nlohmann::json::parse(line);
            add({j.at("doc_id").get<std::string>(), j.at("text").get<std::string>()}, lineno);
        } catch (const nlohmann::json::exception& e) {
            spdlog::warn("skipping document on line {} of {}: {}", lineno, path.string(), e.what());
            ++corpus.skipped;
        }
    }
    return corpus;
}

bool BenchReport::reduced_not_slower() const {
    return reduced.mean_seconds <= full.mean_seconds * 1.05 + 2.0 * (full.stddev_seconds + reduced.stddev_seconds);
}

namespace {

TimingStats summarize(std::vector<double> runs) {
    TimingStats t;
    if (!runs.empty()) {
        double sum = 0;
        for (double r : runs) sum += r;
        t.mean_seconds = sum / static_cast<double>(runs.size());
        double sq = 0;
        for (double r : runs) sq += (r - t.mean_seconds) * (r - t.mean_seconds);
        t.stddev_seconds = runs.size() > 1 ? std::sqrt(sq / static_cast<double>(runs.size() - 1)) : 0.0;
    }
    t.runs = std::move(runs);
    return t;
}

std::vector<ExtractionResult> classify_all(const std::vector<Sentence>& sentences, const RuleMatcher& m) {
    std::vector<ExtractionResult> out;
    out.reserve(sentences.size());
    for (const Sentence& s : sentences) out.push_back(m.classify(s));
    return out;
}

double timed_pass(const std::vector<Sentence>& sentences, const RuleMatcher& m) {
    const auto start = std::chrono::steady_clock::now();
    std::size_t statistics = 0;
    for (const Sentence& s : sentences) statistics += m.classify(s).outcome == Outcome::Statistic;
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    spdlog::debug("timed pass: {} statistics", statistics);
    return elapsed.count();
}

}  // namespace

BenchReport bench(const std::vector<Document>& corpus, const std::vector<Rule>& full_rules,
                  const std::vector<Rule>& reduced_rules, std::size_t repeats, Precedence precedence) {
    if (repeats == 0) throw Error("repeats must be at least 1");
    std::vector<Sentence> sentences;
    for (const Document& d : corpus) {
        for (Sentence& s : split_sentences(d)) sentences.push_back(std::move(s));
    }
    const RuleMatcher full(full_rules, precedence);
    const RuleMatcher reduced(reduced_rules, precedence);

    const auto a = classify_all(sentences, full);
    const auto b = classify_all(sentences, reduced);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i].same_classification(b[i])) {
            throw OutcomeMismatch("sentence " + std::to_string(a[i].index) + " of " + a[i].doc_id + " is " +
                                  std::string(outcome_name(a[i].outcome)) + " under the full rules but " +
                                  std::string(outcome_name(b[i].outcome)) + " under the reduced rules: " + a[i].text);
        }
    }

    std::vector<double> full_runs, reduced_runs;
    for (std::size_t r = 0; r < repeats; ++r) {
        full_runs.push_back(timed_pass(sentences, full));
        reduced_runs.push_back(timed_pass(sentences, reduced));
    }

    BenchReport report;
    report.full = summarize(std::move(full_runs));
    report.reduced = summarize(std::move(reduced_runs));
    report.sentences = sentences.size();
    report.full_rules = full_rules.size();
    report.reduced_rules = reduced_rules.size();
    report.outcomes_identical = true;
    return report;
}

nlohmann::json to_json(const ExtractionResult& r) {
    using nlohmann::json;
    json j;
    j["doc_id"] = r.doc_id;
    j["index"] = r.index;
    j["text"] = r.text;
    j["outcome"] = outcome_name(r.outcome);
    j["matched_rule_id"] = r.matched_rule_id ? json(*r.matched_rule_id) : json(nullptr);
    j["statistic_type"] = r.statistic_type ? json(*r.statistic_type) : json(nullptr);
    j["apa"] = r.apa ? json(*r.apa) : json(nullptr);
    j["values"] = r.values ? json(*r.values) : json(nullptr);
    return j;
}

nlohmann::json to_json(const CorpusReport& report) {
    using nlohmann::json;
    json matrix = json::array();
    for (std::string_view t : kStatisticTypes) {
        const auto it = report.by_type.find(std::string(t));
        const TypeCounts c = it == report.by_type.end() ? TypeCounts{} : it->second;
        matrix.push_back({{"statistic_type", t}, {"apa", c.apa}, {"non_apa", c.non_apa}});
    }
    return {{"matrix", matrix},
            {"total_statistics", report.total_statistics},
            {"apa_statistics", report.apa_total()},
            {"rejected", report.rejected},
            {"unmatched", report.unmatched},
            {"sentences", report.sentences},
            {"documents", report.documents},
            {"skipped_documents", report.skipped_documents},
            {"apa_share_with_anova_no_r", report.apa_share_with_anova_no_r},
            {"apa_share_without_anova_no_r", report.apa_share_without_anova_no_r}};
}

nlohmann::json to_json(const BenchReport& report) {
    auto timing = [](const TimingStats& t) {
        return nlohmann::json{{"mean_seconds", t.mean_seconds}, {"stddev_seconds", t.stddev_seconds}, {"runs", t.runs}};
    };
    return {{"full", timing(report.full)},
            {"reduced", timing(report.reduced)},
            {"sentences", report.sentences},
            {"full_rules", report.full_rules},
            {"reduced_rules", report.reduced_rules},
            {"outcomes_identical", report.outcomes_identical},
            {"reduced_not_slower", report.reduced_not_slower()}};
}

}  // namespace rexincl
