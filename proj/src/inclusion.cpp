#include "rexincl/inclusion.hpp"

namespace rexincl {

namespace {

Alphabet joint_alphabet(const Dfa& a, const Dfa& b) {
    std::vector<CharSet> sets = a.alphabet().classes();
    sets.insert(sets.end(), b.alphabet().classes().begin(), b.alphabet().classes().end());
    return Alphabet::refine(sets);
}

InclusionVerdict decide(const CompiledPattern& superset, const CompiledPattern& candidate, PairTrace* visited) {
    const Alphabet sigma = joint_alphabet(superset.dfa, candidate.dfa);
    const Dfa superset_complement = complement(complete(superset.dfa, sigma));
    const Dfa cand = complete(candidate.dfa, sigma);
    InclusionVerdict v = inclusion(superset_complement, cand, visited);
    v.flagged_approximate = superset.expr.approximate || candidate.expr.approximate;
    return v;
}

}  // namespace

CompiledPattern compile(std::string_view text) { return compile(RawPattern{std::string(text), std::nullopt}); }

CompiledPattern compile(const RawPattern& raw) {
    NormalizedExpr expr = parse(raw);
    PostfixProgram postfix = to_postfix(expr);
    Nfa nfa = thompson(postfix);
    Dfa dfa = powerset(nfa);
    return CompiledPattern{raw.text, std::move(expr), std::move(postfix), std::move(nfa), std::move(dfa)};
}

bool gate_passes(const CompiledPattern& superset, const CompiledPattern& candidate) {
    return alphabet_subset(candidate.nfa, superset.nfa);
}

bool includes(const CompiledPattern& superset, const CompiledPattern& candidate) {
    if (!gate_passes(superset, candidate)) return false;
    return decide(superset, candidate, nullptr).included;
}

InclusionVerdict check_inclusion(const CompiledPattern& superset, const CompiledPattern& candidate,
                                 PairTrace* visited) {
    return decide(superset, candidate, gate_passes(superset, candidate) ? visited : nullptr);
}

}  // namespace rexincl
