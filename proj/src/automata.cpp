#include "rexincl/automata.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "rexincl/errors.hpp"

namespace rexincl {

// ---------------------------------------------------------------- Alphabet

Alphabet Alphabet::refine(std::span<const CharSet> sets) {
    std::vector<CharSet> classes;
    for (const CharSet& s : sets) {
        if (s.empty()) continue;
        std::vector<CharSet> next;
        CharSet rest = s;
        for (const CharSet& c : classes) {
            CharSet in = c & s;
            CharSet out = c - s;
            if (!in.empty()) next.push_back(in);
            if (!out.empty()) next.push_back(out);
            rest = rest - c;
        }
        if (!rest.empty()) next.push_back(rest);
        classes = std::move(next);
    }
    std::sort(classes.begin(), classes.end(),
              [](const CharSet& a, const CharSet& b) { return a.lowest() < b.lowest(); });
    return Alphabet(std::move(classes));
}

CharSet Alphabet::chars() const {
    CharSet all;
    for (const CharSet& c : classes_) all |= c;
    return all;
}

std::optional<std::size_t> Alphabet::class_of(unsigned char c) const {
    for (std::size_t i = 0; i < classes_.size(); ++i)
        if (classes_[i].contains(c)) return i;
    return std::nullopt;
}

// --------------------------------------------------------------------- Nfa

Nfa::Nfa(std::size_t state_count, StateId start, StateId accept, std::vector<NfaEdge> edges)
    : state_count_(state_count), start_(start), accept_(accept), edges_(std::move(edges)) {
    offsets_.assign(state_count_ + 1, 0);
    for (const NfaEdge& e : edges_) {
        if (e.from >= state_count_ || e.to >= state_count_)
            throw InvariantViolation("NFA edge references unknown state");
        ++offsets_[e.from + 1];
    }
    for (std::size_t i = 0; i < state_count_; ++i) offsets_[i + 1] += offsets_[i];
    order_.resize(edges_.size());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (std::size_t i = 0; i < edges_.size(); ++i) order_[fill[edges_[i].from]++] = i;
}

std::span<const std::size_t> Nfa::out_edges(StateId s) const {
    return std::span<const std::size_t>(order_).subspan(offsets_[s], offsets_[s + 1] - offsets_[s]);
}

std::vector<CharSet> Nfa::symbol_sets() const {
    std::vector<CharSet> out;
    for (const NfaEdge& e : edges_)
        if (e.label && std::find(out.begin(), out.end(), *e.label) == out.end()) out.push_back(*e.label);
    return out;
}

CharSet Nfa::chars() const {
    CharSet all;
    for (const NfaEdge& e : edges_)
        if (e.label) all |= *e.label;
    return all;
}

std::vector<StateId> Nfa::epsilon_closure(std::vector<StateId> states) const {
    std::vector<bool> seen(state_count_, false);
    std::vector<StateId> stack;
    for (StateId s : states) {
        if (!seen[s]) {
            seen[s] = true;
            stack.push_back(s);
        }
    }
    while (!stack.empty()) {
        StateId s = stack.back();
        stack.pop_back();
        for (std::size_t ei : out_edges(s)) {
            const NfaEdge& e = edges_[ei];
            if (!e.label && !seen[e.to]) {
                seen[e.to] = true;
                stack.push_back(e.to);
            }
        }
    }
    std::vector<StateId> out;
    for (StateId s = 0; s < state_count_; ++s)
        if (seen[s]) out.push_back(s);
    return out;
}

bool Nfa::accepts(std::string_view s) const {
    std::vector<StateId> current = epsilon_closure({start_});
    for (char ch : s) {
        auto c = static_cast<unsigned char>(ch);
        std::vector<StateId> next;
        for (StateId st : current)
            for (std::size_t ei : out_edges(st))
                if (edges_[ei].label && edges_[ei].label->contains(c)) next.push_back(edges_[ei].to);
        if (next.empty()) return false;
        current = epsilon_closure(std::move(next));
    }
    return std::binary_search(current.begin(), current.end(), accept_);
}

// ---------------------------------------------------------------- Thompson

namespace {

class ThompsonBuilder {
public:
    struct Fragment {
        StateId start;
        StateId end;
    };

    StateId add_state() {
        out_.emplace_back();
        alive_.push_back(true);
        return static_cast<StateId>(out_.size() - 1);
    }

    void add_edge(StateId from, std::optional<CharSet> label, StateId to) {
        edges_.push_back({from, std::move(label), to});
        out_[from].push_back(edges_.size() - 1);
    }

    Fragment basic(std::optional<CharSet> label) {
        StateId s = add_state();
        StateId e = add_state();
        add_edge(s, std::move(label), e);
        return {s, e};
    }

    // The end of `a` and the start of `b` become one state.
    Fragment concat(Fragment a, Fragment b) {
        for (std::size_t ei : out_[b.start]) {
            edges_[ei].from = a.end;
            out_[a.end].push_back(ei);
        }
        out_[b.start].clear();
        alive_[b.start] = false;
        return {a.start, b.end};
    }

    Fragment alternation(Fragment a, Fragment b) {
        StateId s = add_state();
        StateId e = add_state();
        add_edge(s, std::nullopt, a.start);
        add_edge(s, std::nullopt, b.start);
        add_edge(a.end, std::nullopt, e);
        add_edge(b.end, std::nullopt, e);
        return {s, e};
    }

    Fragment kleene(Fragment a) {
        StateId s = add_state();
        StateId e = add_state();
        add_edge(s, std::nullopt, a.start);
        add_edge(s, std::nullopt, e);
        add_edge(a.end, std::nullopt, a.start);
        add_edge(a.end, std::nullopt, e);
        return {s, e};
    }

    Nfa finish(Fragment f) {
        std::vector<StateId> renumber(out_.size(), kNoState);
        StateId next = 0;
        for (std::size_t s = 0; s < out_.size(); ++s)
            if (alive_[s]) renumber[s] = next++;
        std::vector<NfaEdge> edges;
        edges.reserve(edges_.size());
        for (const NfaEdge& e : edges_) edges.push_back({renumber[e.from], e.label, renumber[e.to]});
        return Nfa(next, renumber[f.start], renumber[f.end], std::move(edges));
    }

private:
    std::vector<std::vector<std::size_t>> out_;
    std::vector<bool> alive_;
    std::vector<NfaEdge> edges_;
};

}  // namespace

Nfa thompson(const PostfixProgram& prog) {
    check_well_formed(prog);
    ThompsonBuilder b;
    std::vector<ThompsonBuilder::Fragment> stack;
    for (const Token& t : prog.tokens) {
        switch (t.kind) {
        case TokenKind::Symbol: stack.push_back(b.basic(t.chars)); break;
        case TokenKind::Epsilon: stack.push_back(b.basic(std::nullopt)); break;
        case TokenKind::Star: stack.back() = b.kleene(stack.back()); break;
        case TokenKind::Concat:
        case TokenKind::Alt: {
            auto right = stack.back();
            stack.pop_back();
            auto left = stack.back();
            stack.back() = t.kind == TokenKind::Concat ? b.concat(left, right) : b.alternation(left, right);
            break;
        }
        default: throw MalformedExpression("parenthesis in postfix program");
        }
    }
    return b.finish(stack.front());
}

// --------------------------------------------------------------------- Dfa

Dfa::Dfa(Alphabet alphabet, std::vector<std::vector<StateId>> table, std::vector<bool> accepting, StateId start,
         std::optional<StateId> sink)
    : alphabet_(std::move(alphabet)),
      table_(std::move(table)),
      accepting_(std::move(accepting)),
      start_(start),
      complete_(true),
      sink_(sink) {
    if (accepting_.size() != table_.size()) throw InvariantViolation("DFA accepting vector size mismatch");
    if (start_ >= table_.size()) throw InvariantViolation("DFA start state out of range");
    for (const auto& row : table_) {
        if (row.size() != alphabet_.size()) throw InvariantViolation("DFA row width differs from alphabet");
        for (StateId t : row) {
            if (t == kNoState)
                complete_ = false;
            else if (t >= table_.size())
                throw InvariantViolation("DFA transition to unknown state");
        }
    }
}

std::vector<StateId> Dfa::accepting_states() const {
    std::vector<StateId> out;
    for (StateId s = 0; s < accepting_.size(); ++s)
        if (accepting_[s]) out.push_back(s);
    return out;
}

bool Dfa::accepts(std::string_view s) const {
    StateId st = start_;
    for (char ch : s) {
        auto cls = alphabet_.class_of(static_cast<unsigned char>(ch));
        if (!cls) return false;
        st = table_[st][*cls];
        if (st == kNoState) return false;
    }
    return accepting_[st];
}

namespace {

struct VectorHash {
    std::size_t operator()(const std::vector<StateId>& v) const noexcept {
        std::size_t h = v.size();
        for (StateId x : v) h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

}  // namespace

Dfa powerset(const Nfa& nfa) {
    std::vector<CharSet> sets = nfa.symbol_sets();
    return powerset(nfa, Alphabet::refine(sets));
}

Dfa powerset(const Nfa& nfa, const Alphabet& alphabet) {
    // Classes covered by each labelled edge.
    std::vector<std::vector<std::size_t>> covers(nfa.edges().size());
    for (std::size_t ei = 0; ei < nfa.edges().size(); ++ei) {
        const auto& label = nfa.edges()[ei].label;
        if (!label) continue;
        CharSet covered;
        for (std::size_t c = 0; c < alphabet.size(); ++c) {
            if (alphabet[c].subset_of(*label)) {
                covers[ei].push_back(c);
                covered |= alphabet[c];
            } else if (alphabet[c].intersects(*label)) {
                throw AlphabetMismatch("NFA label " + label->ranges_string() + " splits class " +
                                       alphabet[c].ranges_string());
            }
        }
        if (!(covered == *label))
            throw AlphabetMismatch("NFA label " + label->ranges_string() + " not covered by alphabet");
    }

    std::unordered_map<std::vector<StateId>, StateId, VectorHash> ids;
    std::vector<std::vector<StateId>> subsets;
    std::vector<std::vector<StateId>> table;
    std::deque<StateId> work;

    auto intern = [&](std::vector<StateId> subset) {
        auto [it, inserted] = ids.emplace(subset, static_cast<StateId>(subsets.size()));
        if (inserted) {
            subsets.push_back(std::move(subset));
            table.emplace_back(alphabet.size(), kNoState);
            work.push_back(it->second);
        }
        return it->second;
    };

    StateId start = intern(nfa.epsilon_closure({nfa.start()}));
    while (!work.empty()) {
        StateId d = work.front();
        work.pop_front();
        std::vector<std::vector<StateId>> moves(alphabet.size());
        for (StateId s : subsets[d])
            for (std::size_t ei : nfa.out_edges(s))
                for (std::size_t c : covers[ei]) moves[c].push_back(nfa.edges()[ei].to);
        for (std::size_t c = 0; c < alphabet.size(); ++c) {
            if (moves[c].empty()) continue;
            StateId target = intern(nfa.epsilon_closure(std::move(moves[c])));
            table[d][c] = target;
        }
    }

    std::vector<bool> accepting(subsets.size());
    for (std::size_t d = 0; d < subsets.size(); ++d)
        accepting[d] = std::binary_search(subsets[d].begin(), subsets[d].end(), nfa.accept());

    Dfa dfa(alphabet, std::move(table), std::move(accepting), start);
    dfa.subsets_ = std::move(subsets);
    return dfa;
}

Dfa complete(const Dfa& dfa) { return complete(dfa, dfa.alphabet()); }

Dfa complete(const Dfa& dfa, const Alphabet& sigma) {
    const Alphabet& own = dfa.alphabet();
    if (!own.chars().subset_of(sigma.chars()))
        throw AlphabetMismatch("completion alphabet misses characters " + (own.chars() - sigma.chars()).ranges_string());

    std::vector<std::optional<std::size_t>> source(sigma.size());
    for (std::size_t j = 0; j < sigma.size(); ++j) {
        for (std::size_t i = 0; i < own.size(); ++i) {
            if (sigma[j].subset_of(own[i])) {
                source[j] = i;
                break;
            }
            if (sigma[j].intersects(own[i]))
                throw AlphabetMismatch("class " + sigma[j].ranges_string() + " straddles automaton classes");
        }
    }

    std::optional<StateId> sink = dfa.sink();
    std::vector<std::vector<StateId>> table(dfa.state_count(), std::vector<StateId>(sigma.size(), kNoState));
    std::vector<bool> accepting(dfa.state_count());
    bool missing = false;
    for (StateId s = 0; s < dfa.state_count(); ++s) {
        accepting[s] = dfa.accepting(s);
        for (std::size_t j = 0; j < sigma.size(); ++j) {
            if (source[j]) table[s][j] = dfa.target(s, *source[j]);
            if (table[s][j] == kNoState) missing = true;
        }
    }
    // An existing completion state is reused only while it is still dead.
    if (sink && accepting[*sink]) sink.reset();
    if (missing && !sink) {
        sink = static_cast<StateId>(table.size());
        table.emplace_back(sigma.size(), *sink);
        accepting.push_back(false);
    }
    if (sink) {
        for (auto& row : table)
            for (StateId& t : row)
                if (t == kNoState) t = *sink;
        std::fill(table[*sink].begin(), table[*sink].end(), *sink);
    }
    return Dfa(sigma, std::move(table), std::move(accepting), dfa.start(), sink);
}

Dfa complement(const Dfa& dfa) {
    if (!dfa.complete()) throw IncompleteAutomaton("complement requires a complete DFA");
    std::vector<std::vector<StateId>> table(dfa.state_count());
    std::vector<bool> accepting(dfa.state_count());
    for (StateId s = 0; s < dfa.state_count(); ++s) {
        accepting[s] = !dfa.accepting(s);
        table[s].resize(dfa.alphabet().size());
        for (std::size_t c = 0; c < dfa.alphabet().size(); ++c) table[s][c] = dfa.target(s, c);
    }
    return Dfa(dfa.alphabet(), std::move(table), std::move(accepting), dfa.start(), dfa.sink());
}

// --------------------------------------------------------------- Inclusion

namespace {

using PairKey = std::uint64_t;

PairKey key(StateId p, StateId q) { return (static_cast<PairKey>(p) << 32) | q; }

struct Step {
    PairKey parent;
    std::size_t cls;
};

std::string spell_path(const Alphabet& alphabet, const std::unordered_map<PairKey, Step>& parent, PairKey root,
                       PairKey target) {
    std::vector<std::size_t> classes;
    for (PairKey k = target; k != root;) {
        const Step& st = parent.at(k);
        classes.push_back(st.cls);
        k = st.parent;
    }
    std::string w;
    for (auto it = classes.rbegin(); it != classes.rend(); ++it) w += static_cast<char>(alphabet[*it].lowest());
    return w;
}

void require_same_alphabet(const Dfa& a, const Dfa& b) {
    if (!(a.alphabet() == b.alphabet()))
        throw AlphabetMismatch("inclusion requires both automata over the same alphabet");
}

InclusionVerdict refuted(std::string witness, const Dfa& superset_complement, const Dfa& candidate) {
    if (!candidate.accepts(witness) || !superset_complement.accepts(witness))
        throw InvariantViolation("inclusion witness failed verification");
    return {false, std::move(witness), false};
}

}  // namespace

InclusionVerdict inclusion(const Dfa& superset_complement, const Dfa& candidate, PairTrace* visited) {
    require_same_alphabet(superset_complement, candidate);
    if (!superset_complement.complete()) throw IncompleteAutomaton("complemented superset must be complete");

    const Dfa& ac = superset_complement;
    const std::size_t n = ac.alphabet().size();
    const PairKey root = key(ac.start(), candidate.start());

    // The empty word is a pair too.
    if (ac.accepting(ac.start()) && candidate.accepting(candidate.start())) {
        if (visited) visited->emplace_back(ac.start(), candidate.start());
        return refuted("", ac, candidate);
    }

    std::unordered_set<PairKey> marked;
    std::unordered_map<PairKey, Step> parent;
    std::vector<std::pair<StateId, StateId>> stack;
    stack.emplace_back(ac.start(), candidate.start());
    parent.emplace(root, Step{root, 0});

    while (!stack.empty()) {
        auto [p, q] = stack.back();
        stack.pop_back();
        if (!marked.insert(key(p, q)).second) continue;
        if (visited) visited->emplace_back(p, q);
        for (std::size_t a = 0; a < n; ++a) {
            StateId q2 = candidate.target(q, a);
            if (q2 == kNoState) continue;
            StateId p2 = ac.target(p, a);
            PairKey k2 = key(p2, q2);
            parent.emplace(k2, Step{key(p, q), a});
            if (ac.accepting(p2) && candidate.accepting(q2)) {
                if (visited) visited->emplace_back(p2, q2);
                return refuted(spell_path(ac.alphabet(), parent, root, k2), ac, candidate);
            }
            if (!marked.contains(k2)) stack.emplace_back(p2, q2);
        }
    }
    return {true, std::nullopt, false};
}

InclusionVerdict inclusion_unoptimized(const Dfa& a1, const Dfa& a2) {
    require_same_alphabet(a1, a2);
    const Dfa ac = complement(a1);
    const std::size_t n = ac.alphabet().size();
    const std::size_t cols = a2.state_count();

    // Explicit product B over Q_{A'} x Q_{A2}.
    auto id = [cols](StateId p, StateId q) { return static_cast<std::size_t>(p) * cols + q; };
    const std::size_t total = ac.state_count() * cols;
    std::vector<std::vector<std::size_t>> succ(total);
    std::vector<std::vector<std::size_t>> label(total);
    std::vector<bool> accepting(total);
    for (StateId p = 0; p < ac.state_count(); ++p) {
        for (StateId q = 0; q < a2.state_count(); ++q) {
            const std::size_t u = id(p, q);
            accepting[u] = ac.accepting(p) && a2.accepting(q);
            for (std::size_t a = 0; a < n; ++a) {
                StateId q2 = a2.target(q, a);
                if (q2 == kNoState) continue;
                succ[u].push_back(id(ac.target(p, a), q2));
                label[u].push_back(a);
            }
        }
    }

    // Breadth-first search for a path from the start to an accepting pair.
    const std::size_t start = id(ac.start(), a2.start());
    constexpr std::size_t kUnseen = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> from(total, kUnseen);
    std::vector<std::size_t> via(total, 0);
    std::deque<std::size_t> queue{start};
    from[start] = start;
    while (!queue.empty()) {
        std::size_t u = queue.front();
        queue.pop_front();
        if (accepting[u]) {
            std::string w;
            for (std::size_t x = u; x != start; x = from[x]) w += static_cast<char>(ac.alphabet()[via[x]].lowest());
            std::reverse(w.begin(), w.end());
            return refuted(std::move(w), ac, a2);
        }
        for (std::size_t i = 0; i < succ[u].size(); ++i) {
            std::size_t v = succ[u][i];
            if (from[v] != kUnseen) continue;
            from[v] = u;
            via[v] = label[u][i];
            queue.push_back(v);
        }
    }
    return {true, std::nullopt, false};
}

bool alphabet_subset(const Nfa& candidate, const Nfa& superset) {
    return candidate.chars().subset_of(superset.chars());
}

// ------------------------------------------------------------------ Sampling

std::optional<std::string> random_member(const Dfa& dfa, std::mt19937_64& rng, std::size_t max_len, double stop) {
    constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();
    const std::size_t n = dfa.alphabet().size();
    std::vector<std::size_t> dist(dfa.state_count(), kInf);
    std::vector<std::vector<StateId>> preds(dfa.state_count());
    for (StateId s = 0; s < dfa.state_count(); ++s)
        for (std::size_t a = 0; a < n; ++a)
            if (StateId t = dfa.target(s, a); t != kNoState) preds[t].push_back(s);
    std::deque<StateId> queue;
    for (StateId s : dfa.accepting_states()) {
        dist[s] = 0;
        queue.push_back(s);
    }
    while (!queue.empty()) {
        StateId t = queue.front();
        queue.pop_front();
        for (StateId s : preds[t])
            if (dist[s] == kInf) {
                dist[s] = dist[t] + 1;
                queue.push_back(s);
            }
    }
    if (dist[dfa.start()] == kInf) return std::nullopt;

    auto pick_char = [&](const CharSet& cls) {
        std::vector<unsigned char> members = (cls & CharSet::range(0x20, 0x7e)).members();
        if (members.empty()) members = cls.members();
        std::uniform_int_distribution<std::size_t> d(0, members.size() - 1);
        return static_cast<char>(members[d(rng)]);
    };

    std::bernoulli_distribution halt(stop);
    std::string out;
    StateId s = dfa.start();
    while (true) {
        if (dfa.accepting(s) && (out.size() >= max_len || halt(rng))) return out;
        std::vector<std::size_t> options;
        for (std::size_t a = 0; a < n; ++a) {
            StateId t = dfa.target(s, a);
            if (t == kNoState || dist[t] == kInf) continue;
            if (out.size() >= max_len && dist[t] + 1 != dist[s]) continue;
            options.push_back(a);
        }
        if (options.empty()) return out;  // accepting dead end
        std::uniform_int_distribution<std::size_t> d(0, options.size() - 1);
        std::size_t a = options[d(rng)];
        out += pick_char(dfa.alphabet()[a]);
        s = dfa.target(s, a);
    }
}

// --------------------------------------------------------------------- dot

namespace {

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

}  // namespace

std::string to_dot(const Nfa& nfa, std::string_view name) {
    std::ostringstream os;
    os << "digraph " << name << " {\n  rankdir=LR;\n";
    os << "  __start [shape=point];\n  __start -> " << nfa.start() << ";\n";
    for (StateId s = 0; s < nfa.state_count(); ++s)
        os << "  " << s << " [shape=" << (s == nfa.accept() ? "doublecircle" : "circle") << "];\n";
    for (const NfaEdge& e : nfa.edges())
        os << "  " << e.from << " -> " << e.to << " [label=\""
           << (e.label ? dot_escape(e.label->to_string()) : std::string("eps")) << "\"];\n";
    os << "}\n";
    return os.str();
}

std::string to_dot(const Dfa& dfa, std::string_view name) {
    std::ostringstream os;
    os << "digraph " << name << " {\n  rankdir=LR;\n";
    os << "  __start [shape=point];\n  __start -> " << dfa.start() << ";\n";
    for (StateId s = 0; s < dfa.state_count(); ++s)
        os << "  " << s << " [shape=" << (dfa.accepting(s) ? "doublecircle" : "circle") << "];\n";
    for (StateId s = 0; s < dfa.state_count(); ++s) {
        // One edge per target, labelled with the union of its classes.
        std::map<StateId, CharSet> grouped;
        for (std::size_t a = 0; a < dfa.alphabet().size(); ++a)
            if (StateId t = dfa.target(s, a); t != kNoState) grouped[t] |= dfa.alphabet()[a];
        for (const auto& [t, cs] : grouped)
            os << "  " << s << " -> " << t << " [label=\"" << dot_escape(cs.to_string()) << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace rexincl
