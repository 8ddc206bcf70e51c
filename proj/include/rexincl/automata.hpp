#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rexincl/charset.hpp"
#include "rexincl/frontend.hpp"

namespace rexincl {

using StateId = std::uint32_t;
inline constexpr StateId kNoState = static_cast<StateId>(-1);

// A list of disjoint, non-empty byte classes. DFA transitions are indexed
// by class position.
class Alphabet {
public:
    Alphabet() = default;

    // Coarsest partition of the union of `sets` in which every input set
    // is a union of classes. Classes are ordered by lowest member.
    static Alphabet refine(std::span<const CharSet> sets);

    std::size_t size() const { return classes_.size(); }
    const CharSet& operator[](std::size_t i) const { return classes_[i]; }
    const std::vector<CharSet>& classes() const { return classes_; }
    CharSet chars() const;
    std::optional<std::size_t> class_of(unsigned char c) const;

    bool operator==(const Alphabet&) const = default;

private:
    explicit Alphabet(std::vector<CharSet> classes) : classes_(std::move(classes)) {}

    std::vector<CharSet> classes_;
};

struct NfaEdge {
    StateId from = 0;
    std::optional<CharSet> label;  // nullopt is an epsilon edge
    StateId to = 0;
};

// Thompson automaton: one start state, one accepting state.
class Nfa {
public:
    Nfa(std::size_t state_count, StateId start, StateId accept, std::vector<NfaEdge> edges);

    std::size_t state_count() const { return state_count_; }
    StateId start() const { return start_; }
    StateId accept() const { return accept_; }
    const std::vector<NfaEdge>& edges() const { return edges_; }
    std::span<const std::size_t> out_edges(StateId s) const;

    // Distinct labels used on transitions.
    std::vector<CharSet> symbol_sets() const;
    // Union of all labels.
    CharSet chars() const;

    std::vector<StateId> epsilon_closure(std::vector<StateId> states) const;
    bool accepts(std::string_view s) const;

private:
    std::size_t state_count_;
    StateId start_;
    StateId accept_;
    std::vector<NfaEdge> edges_;
    std::vector<std::size_t> offsets_;     // CSR index into order_
    std::vector<std::size_t> order_;
};

class Dfa {
public:
    Dfa(Alphabet alphabet, std::vector<std::vector<StateId>> table, std::vector<bool> accepting,
        StateId start, std::optional<StateId> sink = std::nullopt);

    const Alphabet& alphabet() const { return alphabet_; }
    std::size_t state_count() const { return table_.size(); }
    StateId start() const { return start_; }
    bool accepting(StateId s) const { return accepting_[s]; }
    std::vector<StateId> accepting_states() const;
    StateId target(StateId s, std::size_t cls) const { return table_[s][cls]; }
    bool complete() const { return complete_; }
    std::optional<StateId> sink() const { return sink_; }
    // NFA subset each state was built from, empty when not from powerset.
    const std::vector<std::vector<StateId>>& subsets() const { return subsets_; }

    bool accepts(std::string_view s) const;

private:
    friend Dfa powerset(const Nfa& nfa, const Alphabet& alphabet);

    Alphabet alphabet_;
    std::vector<std::vector<StateId>> table_;
    std::vector<bool> accepting_;
    StateId start_;
    bool complete_;
    std::optional<StateId> sink_;
    std::vector<std::vector<StateId>> subsets_;
};

struct InclusionVerdict {
    bool included = false;
    std::optional<std::string> witness;
    bool flagged_approximate = false;
};

// Pairs (superset-complement state, candidate state) in visiting order.
using PairTrace = std::vector<std::pair<StateId, StateId>>;

Nfa thompson(const PostfixProgram& prog);

// Lazy subset construction over the NFA's own refined alphabet.
Dfa powerset(const Nfa& nfa);
// Same, over a given alphabet; every NFA label must be a union of classes.
Dfa powerset(const Nfa& nfa, const Alphabet& alphabet);

// Re-expresses `dfa` over `sigma` and routes missing transitions into a
// fresh non-accepting sink. `sigma` must cover the DFA's characters and
// refine its classes.
Dfa complete(const Dfa& dfa, const Alphabet& sigma);
Dfa complete(const Dfa& dfa);

Dfa complement(const Dfa& dfa);

// Pair-stack traversal deciding L(candidate) ⊆ complement of L(superset_complement).
InclusionVerdict inclusion(const Dfa& superset_complement, const Dfa& candidate, PairTrace* visited = nullptr);

// Explicit product automaton and reachability search; a1 is the superset
// and is complemented internally.
InclusionVerdict inclusion_unoptimized(const Dfa& a1, const Dfa& a2);

// Every character the candidate can read is readable by the superset.
bool alphabet_subset(const Nfa& candidate, const Nfa& superset);

// Random member of L(dfa); nullopt if the language is empty. Walks stop
// with probability `stop` at accepting states and take the shortest
// completion once `max_len` is reached.
std::optional<std::string> random_member(const Dfa& dfa, std::mt19937_64& rng, std::size_t max_len = 24,
                                         double stop = 0.3);

std::string to_dot(const Nfa& nfa, std::string_view name = "nfa");
std::string to_dot(const Dfa& dfa, std::string_view name = "dfa");

}  // namespace rexincl
