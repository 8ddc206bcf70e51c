#pragma once

#include <string>

#include "rexincl/automata.hpp"
#include "rexincl/frontend.hpp"

namespace rexincl {

// Everything derived from one pattern that pairwise checks reuse.
struct CompiledPattern {
    std::string text;
    NormalizedExpr expr;
    PostfixProgram postfix;
    Nfa nfa;
    Dfa dfa;  // over the pattern's own alphabet, not completed
};

CompiledPattern compile(const RawPattern& raw);
CompiledPattern compile(std::string_view text);

// Necessary condition for inclusion: the candidate uses no character the
// superset cannot read.
bool gate_passes(const CompiledPattern& superset, const CompiledPattern& candidate);

// L(candidate) ⊆ L(superset)? Both DFAs are completed over the refinement
// of their two alphabets; the superset side is complemented and the pair
// traversal searches for a word accepted by both.
bool includes(const CompiledPattern& superset, const CompiledPattern& candidate);

// Same decision with a verified witness on failure; a failed gate is
// reported as not included and the witness is still computed.
InclusionVerdict check_inclusion(const CompiledPattern& superset, const CompiledPattern& candidate,
                                 PairTrace* visited = nullptr);

}  // namespace rexincl
