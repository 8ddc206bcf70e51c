#include "rexincl/oracle.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "rexincl/errors.hpp"

namespace rexincl::oracle {

namespace {

using Positions = std::vector<bool>;

// ends[j] is true if the tree can match s[i, j) for some i in `from`.
Positions step(const RegexAst& ast, std::string_view s, const Positions& from) {
    const std::size_t n = s.size();
    Positions out(n + 1, false);
    switch (ast.kind()) {
    case RegexAst::Kind::Epsilon: return from;
    case RegexAst::Kind::Symbol:
        for (std::size_t i = 0; i < n; ++i)
            if (from[i] && ast.chars().contains(static_cast<unsigned char>(s[i]))) out[i + 1] = true;
        return out;
    case RegexAst::Kind::Concat: return step(ast.right(), s, step(ast.left(), s, from));
    case RegexAst::Kind::Alt: {
        Positions a = step(ast.left(), s, from);
        Positions b = step(ast.right(), s, from);
        for (std::size_t i = 0; i <= n; ++i) out[i] = a[i] || b[i];
        return out;
    }
    case RegexAst::Kind::Star: {
        out = from;
        Positions frontier = from;
        while (true) {
            Positions next = step(ast.left(), s, frontier);
            bool grew = false;
            for (std::size_t i = 0; i <= n; ++i) {
                if (next[i] && !out[i]) {
                    out[i] = true;
                    grew = true;
                } else {
                    next[i] = false;
                }
            }
            if (!grew) return out;
            frontier = std::move(next);
        }
    }
    }
    return out;
}

void check_bounds(const std::vector<char>& alphabet, std::size_t max_len) {
    if (alphabet.size() > kMaxAlphabet)
        throw BoundExceeded("oracle alphabet limited to " + std::to_string(kMaxAlphabet) + " characters");
    if (max_len > kMaxLength)
        throw BoundExceeded("oracle string length limited to " + std::to_string(kMaxLength));
}

}  // namespace

bool ast_match(const RegexAst& ast, std::string_view s) {
    Positions from(s.size() + 1, false);
    from[0] = true;
    return step(ast, s, from)[s.size()];
}

std::vector<std::string> all_strings(const std::vector<char>& alphabet, std::size_t max_len) {
    std::vector<std::string> out{""};
    std::size_t layer_begin = 0;
    for (std::size_t len = 1; len <= max_len; ++len) {
        std::size_t layer_end = out.size();
        for (std::size_t i = layer_begin; i < layer_end; ++i)
            for (char c : alphabet) out.push_back(out[i] + c);
        layer_begin = layer_end;
    }
    return out;
}

LanguageSample enumerate_language(const RegexAst& ast, const std::vector<char>& alphabet, std::size_t max_len) {
    check_bounds(alphabet, max_len);
    LanguageSample sample{alphabet, max_len, {}};
    for (const std::string& s : all_strings(alphabet, max_len))
        if (ast_match(ast, s)) sample.accepted.insert(s);
    return sample;
}

bool verify_inclusion(const RegexAst& sub, const RegexAst& sup, const std::vector<char>& alphabet,
                      std::size_t max_len, std::string* witness) {
    check_bounds(alphabet, max_len);
    for (const std::string& s : all_strings(alphabet, max_len)) {
        if (ast_match(sub, s) && !ast_match(sup, s)) {
            if (witness) *witness = s;
            return false;
        }
    }
    return true;
}

std::vector<char> representatives(const RegexAst& a, const RegexAst& b) {
    // Refine by hand so this stays independent of the automata module.
    std::vector<CharSet> classes;
    auto collect = [&](auto&& self, const RegexAst& t) -> void {
        switch (t.kind()) {
        case RegexAst::Kind::Symbol: {
            std::vector<CharSet> next;
            CharSet rest = t.chars();
            for (const CharSet& c : classes) {
                if (!(c & t.chars()).empty()) next.push_back(c & t.chars());
                if (!(c - t.chars()).empty()) next.push_back(c - t.chars());
                rest = rest - c;
            }
            if (!rest.empty()) next.push_back(rest);
            classes = std::move(next);
            break;
        }
        case RegexAst::Kind::Epsilon: break;
        case RegexAst::Kind::Star: self(self, t.left()); break;
        default:
            self(self, t.left());
            self(self, t.right());
        }
    };
    collect(collect, a);
    collect(collect, b);
    std::vector<char> out;
    for (const CharSet& c : classes) out.push_back(static_cast<char>(c.lowest()));
    std::sort(out.begin(), out.end());
    return out;
}

GeneratorWeights load_weights(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open generator weights " + path, 0);
    nlohmann::json j = nlohmann::json::parse(in);
    GeneratorWeights w;
    w.symbol = j.value("symbol", w.symbol);
    w.char_class = j.value("char_class", w.char_class);
    w.concat = j.value("concat", w.concat);
    w.alternation = j.value("alternation", w.alternation);
    w.star = j.value("star", w.star);
    w.plus = j.value("plus", w.plus);
    w.optional = j.value("optional", w.optional);
    w.counted = j.value("counted", w.counted);
    w.alphabet = j.value("alphabet", w.alphabet);
    w.max_depth = j.value("max_depth", w.max_depth);
    return w;
}

namespace {

RegexAst repeat_copies(const RegexAst& x, int k) {
    if (k == 0) return RegexAst::epsilon();
    RegexAst out = x;
    for (int i = 1; i < k; ++i) out = RegexAst::concat(out, x);
    return out;
}

// Generates a pattern whose text is always a self-contained atom or a
// parenthesised group, so that callers can append quantifiers.
GeneratedPattern generate(std::mt19937_64& rng, const GeneratorWeights& w, std::size_t depth) {
    const std::string& sigma = w.alphabet;
    std::uniform_int_distribution<std::size_t> pick_char(0, sigma.size() - 1);
    auto leaf = [&]() -> GeneratedPattern {
        std::bernoulli_distribution use_class(w.char_class / (w.symbol + w.char_class));
        if (!use_class(rng)) {
            char c = sigma[pick_char(rng)];
            return {std::string(1, c), RegexAst::symbol(static_cast<unsigned char>(c))};
        }
        // Two distinct members.
        char a = sigma[pick_char(rng)];
        char b = sigma[pick_char(rng)];
        if (a == b) b = sigma[(sigma.find(a) + 1) % sigma.size()];
        return {std::string("[") + a + b + "]",
                RegexAst::alt(RegexAst::symbol(static_cast<unsigned char>(a)),
                              RegexAst::symbol(static_cast<unsigned char>(b)))};
    };
    if (depth <= 1) return leaf();

    std::discrete_distribution<int> pick({w.symbol + w.char_class, w.concat, w.alternation, w.star, w.plus,
                                          w.optional, w.counted});
    switch (pick(rng)) {
    case 0: return leaf();
    case 1: {
        GeneratedPattern l = generate(rng, w, depth - 1);
        GeneratedPattern r = generate(rng, w, depth - 1);
        return {"(" + l.text + r.text + ")", RegexAst::concat(l.ast, r.ast)};
    }
    case 2: {
        GeneratedPattern l = generate(rng, w, depth - 1);
        GeneratedPattern r = generate(rng, w, depth - 1);
        return {"(" + l.text + "|" + r.text + ")", RegexAst::alt(l.ast, r.ast)};
    }
    case 3: {
        GeneratedPattern x = generate(rng, w, depth - 1);
        return {"(" + x.text + "*)", RegexAst::star(x.ast)};
    }
    case 4: {
        GeneratedPattern x = generate(rng, w, depth - 1);
        return {"(" + x.text + "+)", RegexAst::concat(x.ast, RegexAst::star(x.ast))};
    }
    case 5: {
        GeneratedPattern x = generate(rng, w, depth - 1);
        return {"(" + x.text + "?)", RegexAst::alt(x.ast, RegexAst::epsilon())};
    }
    default: {
        GeneratedPattern x = generate(rng, w, depth - 1);
        std::uniform_int_distribution<int> lo_d(0, 2);
        int lo = lo_d(rng);
        std::uniform_int_distribution<int> hi_d(lo, 3);
        int hi = hi_d(rng);
        RegexAst alts = repeat_copies(x.ast, lo);
        for (int k = lo + 1; k <= hi; ++k) alts = RegexAst::alt(alts, repeat_copies(x.ast, k));
        return {"(" + x.text + "{" + std::to_string(lo) + "," + std::to_string(hi) + "})", alts};
    }
    }
}

}  // namespace

GeneratedPattern random_pattern(std::mt19937_64& rng, const GeneratorWeights& weights) {
    return generate(rng, weights, weights.max_depth);
}

}  // namespace rexincl::oracle
