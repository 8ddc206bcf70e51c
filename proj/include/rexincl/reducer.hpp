#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "rexincl/rules.hpp"

namespace rexincl {

inline constexpr RuleId kHistogramBucket = 100;

struct SkippedRule {
    RuleId id = 0;
    std::string reason;
};

struct IdPair {
    RuleId superset = 0;
    RuleId candidate = 0;
    auto operator<=>(const IdPair&) const = default;
};

struct ReduceOptions {
    unsigned jobs = 1;
    // Treat inclusions involving approximate normalizations as non-inclusions.
    bool strict = false;
    // Restrict to one polarity; both when unset.
    std::optional<Polarity> polarity;
};

struct InclusionReport {
    // Exact inclusions: includes[a] lists every b != a with L(b) ⊆ L(a).
    std::map<RuleId, std::vector<RuleId>> includes;
    std::map<RuleId, std::size_t> included_by_count;
    std::set<RuleId> removed;
    std::set<RuleId> survivors;
    std::vector<std::vector<RuleId>> equivalence_classes;
    // Inclusions that hold only for the approximate normalization.
    std::vector<IdPair> flagged;
    // Rules whose removal would rest on a flagged inclusion; they survive.
    std::set<RuleId> needs_review;
    std::vector<SkippedRule> skipped;
    // Removed rules per 100-id bucket, keyed by bucket start.
    std::map<RuleId, std::size_t> histogram_by_id_bucket;

    std::size_t rule_count = 0;
    std::size_t pairs_checked = 0;
    std::size_t pairs_passing_gate = 0;
    bool strict = false;
    std::optional<Polarity> polarity;
    // Polarity of every rule in the report.
    std::map<RuleId, Polarity> polarity_of;
};

// Pairwise inclusion within each polarity group. Deterministic for any
// number of jobs.
InclusionReport compute_inclusions(const std::vector<Rule>& rules, const ReduceOptions& options = {});

// Rules not in report.removed, in input order.
std::vector<Rule> reduce(const InclusionReport& report, const std::vector<Rule>& rules);

nlohmann::json to_json(const InclusionReport& report);

}  // namespace rexincl
