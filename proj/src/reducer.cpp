#include "rexincl/reducer.hpp"

#include <algorithm>
#include <memory>
#include <numeric>

#include <spdlog/spdlog.h>

#include "rexincl/errors.hpp"
#include "rexincl/inclusion.hpp"
#include "rexincl/parallel.hpp"

namespace rexincl {

namespace {

struct Found {
    std::size_t candidate;  // index into the group
    bool approximate;
};

struct RowResult {
    std::vector<Found> found;
    std::size_t checked = 0;
    std::size_t gated = 0;
};

using Relation = std::map<RuleId, std::set<RuleId>>;

bool related(const Relation& rel, RuleId sup, RuleId cand) {
    auto it = rel.find(sup);
    return it != rel.end() && it->second.contains(cand);
}

// A rule goes when some other rule strictly includes it, or when it shares
// an equivalence class with a lower id.
std::set<RuleId> removable(const Relation& rel) {
    std::set<RuleId> out;
    for (const auto& [sup, cands] : rel) {
        for (RuleId cand : cands) {
            if (!related(rel, cand, sup) || sup < cand) out.insert(cand);
        }
    }
    return out;
}

std::vector<std::vector<RuleId>> equivalence_classes(const Relation& rel) {
    std::map<RuleId, RuleId> parent;
    auto find = [&](RuleId x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& [sup, cands] : rel) {
        for (RuleId cand : cands) {
            if (!related(rel, cand, sup)) continue;
            parent.try_emplace(sup, sup);
            parent.try_emplace(cand, cand);
            RuleId a = find(sup), b = find(cand);
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
    }
    std::map<RuleId, std::vector<RuleId>> classes;
    for (const auto& [id, _] : parent) classes[find(id)].push_back(id);
    std::vector<std::vector<RuleId>> out;
    for (auto& [_, members] : classes) out.push_back(std::move(members));
    return out;
}

}  // namespace

InclusionReport compute_inclusions(const std::vector<Rule>& rules, const ReduceOptions& options) {
    InclusionReport report;
    report.strict = options.strict;
    report.polarity = options.polarity;

    std::vector<const Rule*> selected;
    for (const Rule& r : rules) {
        if (options.polarity && r.polarity != *options.polarity) continue;
        selected.push_back(&r);
        report.polarity_of[r.id] = r.polarity;
    }
    report.rule_count = selected.size();

    std::vector<std::unique_ptr<CompiledPattern>> compiled(selected.size());
    std::vector<std::string> failure(selected.size());
    parallel_for(selected.size(), options.jobs, [&](std::size_t i) {
        try {
            compiled[i] = std::make_unique<CompiledPattern>(compile(selected[i]->raw()));
        } catch (const Error& e) {
            failure[i] = e.what();
        }
    });

    std::vector<std::vector<std::size_t>> groups(2);
    for (std::size_t i = 0; i < selected.size(); ++i) {
        if (!compiled[i]) {
            spdlog::warn("rule {} skipped: {}", selected[i]->id, failure[i]);
            report.skipped.push_back({selected[i]->id, failure[i]});
            continue;
        }
        groups[selected[i]->polarity == Polarity::Positive ? 0 : 1].push_back(i);
    }

    Relation exact, with_approx;
    for (const auto& group : groups) {
        std::vector<RowResult> rows(group.size());
        parallel_for(group.size(), options.jobs, [&](std::size_t a) {
            const CompiledPattern& sup = *compiled[group[a]];
            RowResult& row = rows[a];
            for (std::size_t b = 0; b < group.size(); ++b) {
                if (a == b) continue;
                const CompiledPattern& cand = *compiled[group[b]];
                ++row.checked;
                if (!gate_passes(sup, cand)) continue;
                ++row.gated;
                if (includes(sup, cand)) {
                    row.found.push_back({b, sup.expr.approximate || cand.expr.approximate});
                }
            }
        });
        for (std::size_t a = 0; a < group.size(); ++a) {
            report.pairs_checked += rows[a].checked;
            report.pairs_passing_gate += rows[a].gated;
            const RuleId sup = selected[group[a]]->id;
            for (const Found& f : rows[a].found) {
                const RuleId cand = selected[group[f.candidate]]->id;
                if (f.approximate) {
                    if (options.strict) continue;
                    report.flagged.push_back({sup, cand});
                } else {
                    exact[sup].insert(cand);
                }
                with_approx[sup].insert(cand);
            }
        }
    }
    std::sort(report.flagged.begin(), report.flagged.end());

    for (const auto& [sup, cands] : exact) {
        report.includes[sup].assign(cands.begin(), cands.end());
        for (RuleId c : cands) ++report.included_by_count[c];
    }
    report.removed = removable(exact);
    for (RuleId id : removable(with_approx)) {
        if (!report.removed.contains(id)) report.needs_review.insert(id);
    }
    report.equivalence_classes = equivalence_classes(exact);
    for (const auto& [id, _] : report.polarity_of) {
        if (!report.removed.contains(id)) report.survivors.insert(id);
    }
    for (RuleId id : report.removed) ++report.histogram_by_id_bucket[(id / kHistogramBucket) * kHistogramBucket];

    // The relation restricted to survivors must be empty apart from
    // approximate pairs, or the reduction would be incomplete.
    for (const auto& [sup, cands] : exact) {
        if (!report.survivors.contains(sup)) continue;
        for (RuleId c : cands) {
            if (report.survivors.contains(c)) {
                throw InvariantViolation("surviving rule " + std::to_string(c) + " is included by surviving rule " +
                                         std::to_string(sup));
            }
        }
    }
    return report;
}

std::vector<Rule> reduce(const InclusionReport& report, const std::vector<Rule>& rules) {
    std::vector<Rule> out;
    for (const Rule& r : rules) {
        if (!report.removed.contains(r.id)) out.push_back(r);
    }
    return out;
}

nlohmann::json to_json(const InclusionReport& report) {
    using nlohmann::json;
    json j;
    j["rule_count"] = report.rule_count;
    j["strict"] = report.strict;
    j["polarity"] = report.polarity ? std::string(polarity_name(*report.polarity)) : std::string("both");
    j["pairs_checked"] = report.pairs_checked;
    j["pairs_passing_gate"] = report.pairs_passing_gate;

    json includes = json::array();
    for (const auto& [id, list] : report.includes) includes.push_back({{"id", id}, {"includes", list}});
    j["includes"] = includes;

    json included_by = json::array();
    for (const auto& [id, n] : report.included_by_count) included_by.push_back({{"id", id}, {"count", n}});
    j["included_by_count"] = included_by;

    j["removed"] = report.removed;
    j["survivors"] = report.survivors;
    j["needs_review"] = report.needs_review;
    j["equivalence_classes"] = report.equivalence_classes;

    json flagged = json::array();
    for (const IdPair& p : report.flagged) flagged.push_back({{"superset", p.superset}, {"candidate", p.candidate}});
    j["flagged"] = flagged;

    json skipped = json::array();
    for (const SkippedRule& s : report.skipped) skipped.push_back({{"id", s.id}, {"reason", s.reason}});
    j["skipped"] = skipped;

    json histogram = json::array();
    for (const auto& [bucket, n] : report.histogram_by_id_bucket) {
        histogram.push_back({{"bucket", bucket}, {"count", n}});
    }
    j["histogram_by_id_bucket"] = histogram;

    // How many rules include exactly n others, counting rules with none.
    std::map<std::size_t, std::size_t> distribution;
    for (const auto& [id, _] : report.polarity_of) {
        auto it = report.includes.find(id);
        ++distribution[it == report.includes.end() ? 0 : it->second.size()];
    }
    json dist = json::array();
    for (const auto& [n, count] : distribution) dist.push_back({{"includes", n}, {"rules", count}});
    j["inclusion_count_distribution"] = dist;

    json summary = json::object();
    for (Polarity p : {Polarity::Positive, Polarity::Negative}) {
        std::size_t total = 0, removed = 0;
        for (const auto& [id, pol] : report.polarity_of) {
            if (pol != p) continue;
            ++total;
            if (report.removed.contains(id)) ++removed;
        }
        if (total == 0) continue;
        summary[std::string(polarity_name(p))] = {
            {"rules", total},
            {"removed", removed},
            {"survivors", total - removed},
            {"reduction_percent", 100.0 * static_cast<double>(removed) / static_cast<double>(total)}};
    }
    j["summary"] = summary;
    return j;
}

}  // namespace rexincl
