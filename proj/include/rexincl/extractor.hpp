#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rexincl/reducer.hpp"
#include "rexincl/rules.hpp"

namespace rexincl {

struct Document {
    std::string doc_id;
    std::string text;
};

struct Sentence {
    std::string doc_id;
    std::size_t index = 0;  // position among all split sentences of the document
    std::string text;
};

enum class Outcome { Statistic, Rejected, Unmatched };

std::string_view outcome_name(Outcome o);

struct ExtractionResult {
    std::string doc_id;
    std::size_t index = 0;
    std::string text;
    Outcome outcome = Outcome::Unmatched;
    std::optional<RuleId> matched_rule_id;
    std::optional<std::string> statistic_type;
    std::optional<bool> apa;
    std::optional<std::map<std::string, std::string>> values;

    // Outcome, statistic type and APA flag; the matching rule may differ.
    bool same_classification(const ExtractionResult& other) const;
};

enum class Precedence { PositiveFirst, NegativeFirst };

// Line breaks become spaces, then the text is cut at every period that is
// followed by at most one whitespace character and a capital letter.
// Sentences without a decimal digit are dropped.
std::vector<Sentence> split_sentences(const Document& doc);

// Rewrites Python-only regex syntax ((?P<n>..), (?P=n), {,n}) for the
// Boost perl engine and turns unescaped '&' into plain concatenation, as
// the inclusion frontend reads it. Names of named groups are appended to
// `group_names` when given.
std::string to_boost_syntax(std::string_view pattern, std::vector<std::string>* group_names = nullptr);

// Compiled rule set; classification is safe to call from several threads.
class RuleMatcher {
public:
    explicit RuleMatcher(const std::vector<Rule>& rules, Precedence precedence = Precedence::PositiveFirst);
    ~RuleMatcher();
    RuleMatcher(RuleMatcher&&) noexcept;
    RuleMatcher& operator=(RuleMatcher&&) noexcept;

    ExtractionResult classify(const Sentence& sentence) const;

    const std::vector<SkippedRule>& skipped() const;
    std::size_t positive_count() const;
    std::size_t negative_count() const;
    Precedence precedence() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct TypeCounts {
    std::size_t apa = 0;
    std::size_t non_apa = 0;
};

struct CorpusReport {
    std::map<std::string, TypeCounts> by_type;  // every statistic type present
    std::size_t total_statistics = 0;
    std::size_t rejected = 0;
    std::size_t unmatched = 0;
    std::size_t sentences = 0;
    std::size_t documents = 0;
    std::size_t skipped_documents = 0;
    double apa_share_with_anova_no_r = 0.0;
    double apa_share_without_anova_no_r = 0.0;

    std::size_t apa_total() const;
};

struct CorpusRun {
    CorpusReport report;
    std::vector<ExtractionResult> results;  // document order, then sentence order
};

CorpusRun run_corpus(const std::vector<Document>& corpus, const RuleMatcher& matcher, unsigned jobs = 1);

// Tallies a result stream; used by run_corpus.
CorpusReport tally(const std::vector<ExtractionResult>& results);

// Per statistic type, min(n, available) results drawn uniformly without
// replacement. The sample keeps stream order.
std::vector<ExtractionResult> sample(const std::vector<ExtractionResult>& results, std::size_t n,
                                     std::uint64_t seed);

struct Corpus {
    std::vector<Document> documents;
    std::size_t skipped = 0;
};

// A directory of text files (doc_id = path relative to the directory) or a
// JSON Lines file of {"doc_id", "text"} objects.
Corpus load_corpus(const std::filesystem::path& path);

struct TimingStats {
    double mean_seconds = 0.0;
    double stddev_seconds = 0.0;
    std::vector<double> runs;
};

struct BenchReport {
    TimingStats full;
    TimingStats reduced;
    std::size_t sentences = 0;
    std::size_t full_rules = 0;
    std::size_t reduced_rules = 0;
    bool outcomes_identical = false;

    // Reduced mean within noise of, or below, the full mean.
    bool reduced_not_slower() const;
};

// Single-threaded. A warm-up pass per rule set is discarded and used to
// compare classifications; throws OutcomeMismatch on the first difference.
BenchReport bench(const std::vector<Document>& corpus, const std::vector<Rule>& full_rules,
                  const std::vector<Rule>& reduced_rules, std::size_t repeats,
                  Precedence precedence = Precedence::PositiveFirst);

nlohmann::json to_json(const ExtractionResult& result);
nlohmann::json to_json(const CorpusReport& report);
nlohmann::json to_json(const BenchReport& report);

}  // namespace rexincl
