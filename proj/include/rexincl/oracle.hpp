#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "rexincl/ast.hpp"

namespace rexincl::oracle {

// Exhaustive enumeration limits.
inline constexpr std::size_t kMaxAlphabet = 4;
inline constexpr std::size_t kMaxLength = 8;

struct LanguageSample {
    std::vector<char> alphabet;
    std::size_t max_len = 0;
    std::set<std::string> accepted;
};

// Direct membership test by the semantics of the five constructs: the set
// of end positions reachable from each start position. No automata.
bool ast_match(const RegexAst& ast, std::string_view s);

// All strings over `alphabet` up to `max_len` (inclusive), shortest first.
std::vector<std::string> all_strings(const std::vector<char>& alphabet, std::size_t max_len);

LanguageSample enumerate_language(const RegexAst& ast, const std::vector<char>& alphabet, std::size_t max_len);

// Bounded-length inclusion; the witness is the shortest counterexample.
bool verify_inclusion(const RegexAst& sub, const RegexAst& sup, const std::vector<char>& alphabet,
                      std::size_t max_len, std::string* witness = nullptr);

// One representative per class of the refinement of both trees' symbols.
std::vector<char> representatives(const RegexAst& a, const RegexAst& b);

// Construct weights for the random pattern generator.
struct GeneratorWeights {
    double symbol = 4;
    double char_class = 1;
    double concat = 3;
    double alternation = 2;
    double star = 1;
    double plus = 1;
    double optional = 1;
    double counted = 1;
    std::string alphabet = "abc";
    std::size_t max_depth = 4;
};

GeneratorWeights load_weights(const std::string& path);

// Random practical-dialect pattern paired with its independently built
// formal tree (the naive expansion).
struct GeneratedPattern {
    std::string text;
    RegexAst ast;
};

GeneratedPattern random_pattern(std::mt19937_64& rng, const GeneratorWeights& weights);

}  // namespace rexincl::oracle
