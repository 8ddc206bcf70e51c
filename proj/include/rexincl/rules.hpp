#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rexincl/frontend.hpp"

namespace rexincl {

enum class Polarity { Positive, Negative };

std::string_view polarity_name(Polarity p);

// Statistic tags accepted on positive rules.
inline constexpr std::string_view kStatisticTypes[] = {
    "t-test", "pearson", "spearman", "anova", "anova-no-r", "mann-whitney-u", "wilcoxon", "chi-square",
    "z-test", "other"};

bool is_statistic_type(std::string_view tag);

struct SubRule {
    std::string name;
    std::string pattern;
};

struct Rule {
    RuleId id = 0;
    std::string pattern;
    Polarity polarity = Polarity::Negative;
    std::optional<std::string> statistic_type;
    std::optional<bool> apa;
    std::vector<SubRule> subrules;

    RawPattern raw() const { return {pattern, id}; }
};

// JSON Lines, one rule object per line; blank lines are ignored. Result is
// sorted by id.
std::vector<Rule> parse_rules(std::istream& in);
std::vector<Rule> load_rules(const std::filesystem::path& path);

void write_rules(std::ostream& out, const std::vector<Rule>& rules);
void save_rules(const std::filesystem::path& path, const std::vector<Rule>& rules);

}  // namespace rexincl
