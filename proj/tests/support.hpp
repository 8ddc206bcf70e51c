#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "rexincl/automata.hpp"
#include "rexincl/frontend.hpp"
#include "rexincl/inclusion.hpp"
#include "rexincl/oracle.hpp"

namespace testing {

inline std::filesystem::path fixture(std::string_view name) {
    return std::filesystem::path(REXINCL_FIXTURES) / name;
}

inline rexincl::RegexAst ast_of(std::string_view pattern) {
    return rexincl::postfix_to_ast(rexincl::to_postfix(rexincl::parse(pattern)));
}

inline std::string infix(std::string_view pattern) { return rexincl::to_string(rexincl::parse(pattern).tokens); }

inline std::string postfix(std::string_view pattern) {
    return rexincl::to_string(rexincl::to_postfix(rexincl::parse(pattern)).tokens);
}

// L(candidate) ⊆ L(superset) through the full automata pipeline.
inline bool included(std::string_view superset, std::string_view candidate) {
    return rexincl::includes(rexincl::compile(superset), rexincl::compile(candidate));
}

inline bool equivalent(std::string_view a, std::string_view b) { return included(a, b) && included(b, a); }

inline std::vector<char> chars(std::string_view s) { return {s.begin(), s.end()}; }

}  // namespace testing
