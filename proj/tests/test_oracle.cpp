#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "rexincl/errors.hpp"
#include "rexincl/oracle.hpp"
#include "support.hpp"

using namespace rexincl;
using namespace rexincl::oracle;

namespace {

RegexAst sym(char c) { return RegexAst::symbol(static_cast<unsigned char>(c)); }

// [a-b](a|b)*
RegexAst walkthrough_ast() {
    return RegexAst::concat(RegexAst::symbol(CharSet::range('a', 'b')), RegexAst::star(RegexAst::alt(sym('a'), sym('b'))));
}

RegexAst ab() { return RegexAst::concat(sym('a'), sym('b')); }

}  // namespace

TEST_CASE("ast_match") {
    CHECK(ast_match(walkthrough_ast(), "baa"));
    CHECK(ast_match(walkthrough_ast(), "a"));
    CHECK_FALSE(ast_match(walkthrough_ast(), ""));
    CHECK_FALSE(ast_match(walkthrough_ast(), "bac"));
    CHECK(ast_match(RegexAst::star(sym('x')), ""));
    CHECK(ast_match(RegexAst::star(ab()), ""));
    CHECK_FALSE(ast_match(ab(), "ba"));
    CHECK(ast_match(ab(), "ab"));
    CHECK(ast_match(RegexAst::epsilon(), ""));
    // nested stars must terminate
    CHECK(ast_match(RegexAst::star(RegexAst::star(RegexAst::epsilon())), ""));
    CHECK(ast_match(RegexAst::star(RegexAst::alt(RegexAst::epsilon(), sym('a'))), "aaa"));
}

TEST_CASE("all_strings counts") {
    CHECK(all_strings({'a', 'b'}, 3).size() == 15);
    CHECK(all_strings({'a'}, 0) == std::vector<std::string>{""});
}

TEST_CASE("enumerate_language") {
    CHECK(enumerate_language(ab(), {'a', 'b'}, 3).accepted == std::set<std::string>{"ab"});
    CHECK(enumerate_language(RegexAst::star(sym('a')), {'a'}, 3).accepted ==
          std::set<std::string>{"", "a", "aa", "aaa"});
    CHECK(enumerate_language(walkthrough_ast(), {'a', 'b'}, 2).accepted ==
          std::set<std::string>{"a", "b", "aa", "ab", "ba", "bb"});

    CHECK_THROWS_AS(enumerate_language(ab(), {'a', 'b', 'c', 'd', 'e'}, 2), BoundExceeded);
    CHECK_THROWS_AS(enumerate_language(ab(), {'a'}, 9), BoundExceeded);

    SECTION("monotone in max_len") {
        const RegexAst x = RegexAst::star(RegexAst::alt(ab(), sym('c')));
        for (std::size_t k = 0; k < 6; ++k) {
            const auto small = enumerate_language(x, {'a', 'b', 'c'}, k).accepted;
            const auto big = enumerate_language(x, {'a', 'b', 'c'}, k + 1).accepted;
            CHECK(std::includes(big.begin(), big.end(), small.begin(), small.end()));
        }
    }
}

TEST_CASE("verify_inclusion") {
    CHECK(verify_inclusion(ab(), walkthrough_ast(), {'a', 'b'}, 6));
    CHECK(verify_inclusion(walkthrough_ast(), walkthrough_ast(), {'a', 'b'}, 6));
    std::string witness;
    CHECK_FALSE(verify_inclusion(RegexAst::alt(ab(), sym('c')), ab(), {'a', 'b', 'c'}, 2, &witness));
    CHECK(witness == "c");
    CHECK_THROWS_AS(verify_inclusion(ab(), ab(), {'a'}, 20), BoundExceeded);
}

TEST_CASE("representatives pick one character per class") {
    const RegexAst x = RegexAst::symbol(CharSet::range('a', 'c'));
    const RegexAst y = RegexAst::symbol(CharSet::range('b', 'd'));
    CHECK(representatives(x, y) == std::vector<char>{'a', 'b', 'd'});
}

TEST_CASE("random pattern generator") {
    const GeneratorWeights w = load_weights(testing::fixture("generator_weights.json").string());
    CHECK(w.alphabet == "abc");
    CHECK(w.max_depth == 4);

    std::mt19937_64 a(5), b(5);
    for (int i = 0; i < 50; ++i) {
        const GeneratedPattern x = random_pattern(a, w);
        const GeneratedPattern y = random_pattern(b, w);
        CHECK(x.text == y.text);
        for (char c : x.text) {
            if (std::isalpha(static_cast<unsigned char>(c))) CHECK(w.alphabet.find(c) != std::string::npos);
        }
    }
    CHECK_THROWS_AS(load_weights("/nonexistent/weights.json"), FormatError);
}
