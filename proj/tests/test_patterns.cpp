#include <catch2/catch_amalgamated.hpp>

#include "rexincl/patterns.hpp"

using namespace rexincl;

namespace {

using Tags = std::vector<std::string>;

Rule rule(RuleId id, std::string pattern) { return Rule{id, std::move(pattern), Polarity::Negative, {}, {}, {}}; }

}  // namespace

TEST_CASE("pattern tags") {
    CHECK(pattern_tags("[a-zA-Z]{3,}\\s?\\d+(\\.\\d)?") == Tags{"optional-decimal", "word-context"});
    CHECK(pattern_tags("abc").empty());
    CHECK(pattern_tags("\\d(\\.\\d+)?") == Tags{"optional-decimal"});
    CHECK(pattern_tags("p\\s?=\\s?\\d") == Tags{"optional-spacing"});
    CHECK(pattern_tags("\\d+ [mM]") == Tags{"case-pair"});
    CHECK(pattern_tags("[ab]").empty());
    CHECK(pattern_tags("[A-Za-z]+ \\d") == Tags{"word-context"});
    CHECK(pattern_tags("[a-zA-Z]{1,} \\d").empty());
    CHECK(pattern_tags("\\d+\\s?[\xC2\xB5kmndcpfazyhMGTPEZY]?m") == Tags{"si-prefix"});
    CHECK(pattern_tags("[kmnd]?m").empty());
    CHECK(pattern_tags("\\[mM\\]").empty());
}

TEST_CASE("analyze patterns counts rules") {
    const std::vector<Rule> rules = {rule(1, "\\d(\\.\\d+)?"), rule(2, "x\\d+(\\.\\d+)?"), rule(3, "abc"),
                                     rule(4, "\\d+(\\.\\d)? cm"), rule(5, "[mM]ean")};
    const auto counts = analyze_patterns(rules);
    CHECK(counts.at("optional-decimal") == 3);
    CHECK(counts.at("case-pair") == 1);
    CHECK(counts.at("si-prefix") == 0);
    CHECK(counts.size() == std::size(kPatternTags));
}
