#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "rexincl/automata.hpp"
#include "rexincl/errors.hpp"
#include "support.hpp"

using namespace rexincl;

namespace {

Nfa nfa_of(std::string_view pattern) { return thompson(to_postfix(parse(pattern))); }

Dfa dfa_of(std::string_view pattern) { return powerset(nfa_of(pattern)); }

Alphabet letters(std::string_view s) {
    std::vector<CharSet> sets;
    for (char c : s) sets.push_back(CharSet::of(static_cast<unsigned char>(c)));
    return Alphabet::refine(sets);
}

}  // namespace

TEST_CASE("alphabet refinement") {
    const std::vector<CharSet> sets = {CharSet::range('a', 'c'), CharSet::range('b', 'd')};
    const Alphabet sigma = Alphabet::refine(sets);
    REQUIRE(sigma.size() == 3);
    CHECK(sigma[0] == CharSet::of('a'));
    CHECK(sigma[1] == CharSet::range('b', 'c'));
    CHECK(sigma[2] == CharSet::of('d'));
    CHECK(sigma.class_of('c') == 1u);
    CHECK_FALSE(sigma.class_of('z').has_value());
}

TEST_CASE("thompson fragment sizes") {
    SECTION("symbol") {
        const Nfa n = nfa_of("a");
        CHECK(n.state_count() == 2);
        REQUIRE(n.edges().size() == 1);
        CHECK(n.edges()[0].label == CharSet::of('a'));
    }
    SECTION("walkthrough expression") {
        const Nfa n = thompson(parse_postfix("ba|ab|*&"));
        CHECK(n.state_count() == 13);
        CHECK(nfa_of("(b|a)&(a|b)*").state_count() == 13);
    }
    SECTION("concatenation merges the joint state") {
        const Nfa n = thompson(parse_postfix("ab&"));
        CHECK(n.state_count() == 3);
        for (const auto& s : oracle::all_strings({'a', 'b'}, 3)) CHECK(n.accepts(s) == (s == "ab"));
    }
    SECTION("alternation and star") {
        CHECK(nfa_of("a|b").state_count() == 2 + 2 + 2);
        CHECK(nfa_of("a*").state_count() == 2 + 2);
        CHECK(nfa_of("(a|b)*").state_count() == 6 + 2);
    }
    SECTION("epsilon") {
        const Nfa n = nfa_of("()");
        CHECK(n.accepts(""));
        CHECK_FALSE(n.accepts("a"));
    }
    CHECK_THROWS_AS(thompson(parse_postfix("a|")), MalformedExpression);
}

TEST_CASE("powerset") {
    SECTION("walkthrough expression") {
        const Dfa d = dfa_of("(b|a)&(a|b)*");
        // start, one successor per first letter, then self-looping states
        CHECK(d.state_count() == 5);
        CHECK_FALSE(d.accepting(d.start()));
        for (std::size_t c = 0; c < d.alphabet().size(); ++c) {
            const StateId s = d.target(d.start(), c);
            REQUIRE(s != kNoState);
            CHECK(d.accepting(s));
        }
        for (const auto& w : oracle::all_strings({'a', 'b', 'c'}, 5)) {
            CHECK(d.accepts(w) == (!w.empty() && w.find('c') == std::string::npos));
        }
    }
    SECTION("epsilon gives a single accepting start") {
        const Dfa d = dfa_of("()");
        CHECK(d.state_count() == 1);
        CHECK(d.accepting(d.start()));
    }
    SECTION("nfa and dfa agree") {
        const Nfa n = nfa_of("a");
        const Dfa d = powerset(n, letters("ab"));
        for (const auto& w : oracle::all_strings({'a', 'b'}, 5)) CHECK(n.accepts(w) == d.accepts(w));
    }
    SECTION("a label splitting a class is rejected") {
        const std::vector<CharSet> sets = {CharSet::range('a', 'b')};
        CHECK_THROWS_AS(powerset(nfa_of("a"), Alphabet::refine(sets)), AlphabetMismatch);
    }
}

TEST_CASE("completion") {
    SECTION("ab gets a dead state") {
        const Dfa d = dfa_of("ab");
        CHECK_FALSE(d.complete());
        const Dfa c = complete(d, letters("ab"));
        CHECK(c.complete());
        REQUIRE(c.sink().has_value());
        CHECK(c.state_count() == d.state_count() + 1);
        CHECK_FALSE(c.accepting(*c.sink()));
        for (std::size_t k = 0; k < c.alphabet().size(); ++k) CHECK(c.target(*c.sink(), k) == *c.sink());
        for (const auto& w : oracle::all_strings({'a', 'b'}, 4)) CHECK(c.accepts(w) == (w == "ab"));
    }
    SECTION("already complete is unchanged") {
        const Dfa c = complete(dfa_of("ab"), letters("ab"));
        const Dfa again = complete(c, letters("ab"));
        CHECK(again.state_count() == c.state_count());
    }
    SECTION("a over abc") {
        const Dfa c = complete(dfa_of("a"), letters("abc"));
        CHECK(c.accepts("a"));
        for (const char* w : {"b", "c", "aa", "", "ab"}) CHECK_FALSE(c.accepts(w));
    }
    SECTION("sigma must cover the dfa") {
        CHECK_THROWS_AS(complete(dfa_of("ac"), letters("ab")), AlphabetMismatch);
    }
}

TEST_CASE("complement") {
    SECTION("needs a complete dfa") { CHECK_THROWS_AS(complement(dfa_of("ab")), IncompleteAutomaton); }
    SECTION("swaps acceptance") {
        const Dfa c = complete(dfa_of("[a-b](a|b)*"));
        const Dfa n = complement(c);
        CHECK(n.accepts(""));
        CHECK_FALSE(n.accepts("ab"));
        for (const auto& w : oracle::all_strings({'a', 'b'}, 6)) CHECK(c.accepts(w) != n.accepts(w));
        const Dfa back = complement(n);
        for (const auto& w : oracle::all_strings({'a', 'b'}, 6)) CHECK(back.accepts(w) == c.accepts(w));
    }
    SECTION("complement of the sink-only dfa accepts everything") {
        const Dfa sink(letters("ab"), {{0, 0}}, {false}, 0, 0);
        CHECK(sink.complete());
        const Dfa all = complement(sink);
        for (const auto& w : oracle::all_strings({'a', 'b'}, 4)) CHECK(all.accepts(w));
    }
}

TEST_CASE("inclusion by pair traversal") {
    SECTION("walkthrough pair") {
        const CompiledPattern sup = compile("[a-b](a|b)*");
        const CompiledPattern cand = compile("ab");
        CHECK(gate_passes(sup, cand));
        PairTrace visited;
        const InclusionVerdict v = check_inclusion(sup, cand, &visited);
        CHECK(v.included);
        CHECK_FALSE(v.witness.has_value());
        CHECK_FALSE(v.flagged_approximate);
        // (start,start), after a, after ab, then the candidate's dead state
        // paired with every reachable superset state: six pairs.
        CHECK(visited.size() == 6);
    }
    SECTION("reflexive") {
        for (const char* p : {"ab", "[a-b](a|b)*", "a*", "()", "(a|b)*abb", "\\d+(\\.\\d+)?"}) {
            CHECK(testing::included(p, p));
        }
    }
    SECTION("witness") {
        const InclusionVerdict v = check_inclusion(compile("ab"), compile("ab|c"));
        CHECK_FALSE(v.included);
        REQUIRE(v.witness.has_value());
        CHECK(*v.witness == "c");
    }
    SECTION("empty word witness") {
        const InclusionVerdict v = check_inclusion(compile("a+"), compile("a*"));
        CHECK_FALSE(v.included);
        REQUIRE(v.witness.has_value());
        CHECK(v.witness->empty());
    }
    SECTION("epsilon is in a*") { CHECK(testing::included("a*", "()")); }
    SECTION("approximate sides are flagged") {
        const InclusionVerdict v = check_inclusion(compile("^ab"), compile("ab"));
        CHECK(v.included);
        CHECK(v.flagged_approximate);
    }
    SECTION("figure reference rules") {
        CHECK(testing::included("[fF]igure?\\s\\d+(\\s?\\.\\s?\\d+)*", "figure \\d{1,2}"));
        CHECK_FALSE(testing::included("figure \\d{1,2}", "[fF]igure?\\s\\d+(\\s?\\.\\s?\\d+)*"));
    }
    SECTION("mismatched alphabets") {
        const Dfa a = complement(complete(dfa_of("a"), letters("ab")));
        const Dfa b = complete(dfa_of("a"), letters("abc"));
        CHECK_THROWS_AS(inclusion(a, b), AlphabetMismatch);
    }
}

TEST_CASE("unoptimized inclusion agrees") {
    const std::vector<std::pair<const char*, const char*>> pairs = {
        {"[a-b](a|b)*", "ab"}, {"ab", "ab"}, {"ab", "ab|c"}, {"a*", "()"}, {"a+", "a*"}, {"(a|b)*", "(ab)*"}};
    for (const auto& [sup, cand] : pairs) {
        const CompiledPattern s = compile(sup);
        const CompiledPattern c = compile(cand);
        std::vector<CharSet> sets = s.dfa.alphabet().classes();
        for (const CharSet& k : c.dfa.alphabet().classes()) sets.push_back(k);
        const Alphabet sigma = Alphabet::refine(sets);
        const InclusionVerdict fast = inclusion(complement(complete(s.dfa, sigma)), complete(c.dfa, sigma));
        const InclusionVerdict slow = inclusion_unoptimized(complete(s.dfa, sigma), complete(c.dfa, sigma));
        CHECK(fast.included == slow.included);
        CHECK(fast.included == check_inclusion(s, c).included);
        if (slow.witness) {
            CHECK(c.dfa.accepts(*slow.witness));
            CHECK_FALSE(s.dfa.accepts(*slow.witness));
        }
    }
}

TEST_CASE("alphabet gate") {
    CHECK(alphabet_subset(nfa_of("ab"), nfa_of("[a-b](a|b)*")));
    CHECK_FALSE(alphabet_subset(nfa_of("ac"), nfa_of("[a-b](a|b)*")));
    CHECK(alphabet_subset(nfa_of("\\d"), nfa_of("\\w")));
    CHECK_FALSE(alphabet_subset(nfa_of("\\w"), nfa_of("\\d")));
    CHECK_FALSE(testing::included("[a-b](a|b)*", "ac"));
}

TEST_CASE("random members belong to the language") {
    std::mt19937_64 rng(11);
    for (const char* p : {"ab", "(a|b)*abb", "\\d+ participants", "[fF]igure?\\s\\d+"}) {
        const Dfa d = dfa_of(p);
        for (int i = 0; i < 50; ++i) {
            const auto w = random_member(d, rng);
            REQUIRE(w.has_value());
            CHECK(d.accepts(*w));
        }
    }
    const Dfa sink(letters("ab"), {{0, 0}}, {false}, 0, 0);
    CHECK_FALSE(random_member(sink, rng).has_value());
}

TEST_CASE("dot output") {
    const std::string nfa = to_dot(nfa_of("a*"));
    CHECK(nfa.find("digraph") != std::string::npos);
    CHECK(nfa.find("eps") != std::string::npos);
    CHECK(nfa.find("doublecircle") != std::string::npos);
    CHECK(to_dot(dfa_of("ab")).find("doublecircle") != std::string::npos);
}
