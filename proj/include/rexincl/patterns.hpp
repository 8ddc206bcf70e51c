#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "rexincl/rules.hpp"

namespace rexincl {

// Idiom tags recognized by a textual scan of the practical pattern:
//   optional-decimal   \d(\.\d+)?
//   optional-spacing   \s?=\s?
//   case-pair          [mM]
//   word-context       [a-zA-Z]{3,} or [a-zA-Z]+
//   si-prefix          [µkmndcpfazyhMGTPEZY]?
inline constexpr std::string_view kPatternTags[] = {"optional-decimal", "optional-spacing", "case-pair",
                                                    "word-context", "si-prefix"};

// Tags present in one pattern, in kPatternTags order.
std::vector<std::string> pattern_tags(std::string_view pattern);

// Number of rules carrying each tag; every tag is present, possibly 0.
std::map<std::string, std::size_t> analyze_patterns(const std::vector<Rule>& rules);

}  // namespace rexincl
