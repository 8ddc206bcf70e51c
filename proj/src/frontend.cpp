#include "rexincl/frontend.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <sstream>

#include "rexincl/errors.hpp"

namespace rexincl {

namespace {

constexpr int kUnbounded = -1;
constexpr int kMaxRepeat = 1000;

// Parse tree of the practical dialect, before expansion.
struct PNode {
    enum class Kind { Empty, Stripped, Chars, Concat, Alt, Group, Repeat };

    Kind kind = Kind::Empty;
    CharSet chars;
    std::vector<PNode> kids;
    int min = 0;
    int max = 0;

    static PNode empty() { return {}; }
    static PNode stripped() { return {Kind::Stripped, {}, {}, 0, 0}; }
    static PNode of(CharSet cs) { return {Kind::Chars, cs, {}, 0, 0}; }
    static PNode group(PNode inner) {
        PNode g{Kind::Group, {}, {}, 0, 0};
        g.kids.push_back(std::move(inner));
        return g;
    }
};

bool is_hex(char c) { return std::isxdigit(static_cast<unsigned char>(c)) != 0; }
bool is_octal(char c) { return c >= '0' && c <= '7'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

void append_utf8(std::uint32_t cp, std::vector<unsigned char>& out) {
    if (cp < 0x80) {
        out.push_back(static_cast<unsigned char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<unsigned char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<unsigned char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<unsigned char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<unsigned char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<unsigned char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<unsigned char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<unsigned char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<unsigned char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<unsigned char>(0x80 | (cp & 0x3F)));
    }
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    PNode run() {
        if (text_.empty()) throw SyntaxError("empty pattern", 0);
        PNode root = parse_alt();
        if (pos_ < text_.size()) {
            // parse_alt only stops early on ')'
            throw SyntaxError("unbalanced parenthesis", pos_);
        }
        return root;
    }

    std::vector<Feature> features;
    std::vector<CaptureGroup> groups;

private:
    bool at_end() const { return pos_ >= text_.size(); }
    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
    }
    bool starts_with(std::string_view s) const { return text_.substr(pos_).starts_with(s); }

    PNode parse_alt() {
        std::vector<PNode> branches;
        branches.push_back(parse_concat());
        while (!at_end() && peek() == '|') {
            ++pos_;
            branches.push_back(parse_concat());
        }
        if (branches.size() == 1) return std::move(branches.front());
        PNode alt{PNode::Kind::Alt, {}, std::move(branches), 0, 0};
        return alt;
    }

    PNode parse_concat() {
        std::vector<PNode> items;
        std::size_t amp_pos = std::string_view::npos;
        bool seen_operand = false;
        while (!at_end() && peek() != '|' && peek() != ')') {
            if (peek() == '&') {
                if (!seen_operand || amp_pos != std::string_view::npos)
                    throw SyntaxError("dangling '&'", pos_);
                amp_pos = pos_++;
                continue;
            }
            PNode item = parse_quantified();
            seen_operand = true;
            amp_pos = std::string_view::npos;
            if (item.kind != PNode::Kind::Stripped) items.push_back(std::move(item));
        }
        if (amp_pos != std::string_view::npos) throw SyntaxError("dangling '&'", amp_pos);
        if (items.empty()) return PNode::empty();
        if (items.size() == 1) return std::move(items.front());
        return PNode{PNode::Kind::Concat, {}, std::move(items), 0, 0};
    }

    // Matches {m}, {m,}, {,n}, {m,n}, {,}. Returns false (and leaves pos)
    // when the brace is a literal.
    bool try_counted(int& lo, int& hi) {
        std::size_t p = pos_ + 1;
        auto read_num = [&](std::size_t& q, long& v) {
            std::size_t start = q;
            v = 0;
            while (q < text_.size() && is_digit(text_[q])) {
                v = std::min<long>(v * 10 + (text_[q] - '0'), std::numeric_limits<int>::max());
                ++q;
            }
            return q > start;
        };
        long a = 0, b = 0;
        bool has_a = read_num(p, a);
        if (p < text_.size() && text_[p] == '}') {
            if (!has_a) return false;
            lo = hi = static_cast<int>(a);
            pos_ = p + 1;
            return true;
        }
        if (p >= text_.size() || text_[p] != ',') return false;
        ++p;
        bool has_b = read_num(p, b);
        if (p >= text_.size() || text_[p] != '}') return false;
        lo = has_a ? static_cast<int>(a) : 0;
        hi = has_b ? static_cast<int>(b) : kUnbounded;
        pos_ = p + 1;
        return true;
    }

    bool quantifier_ahead() {
        char c = peek();
        if (c == '*' || c == '+' || c == '?') return true;
        if (c != '{') return false;
        std::size_t saved = pos_;
        int lo = 0, hi = 0;
        bool ok = try_counted(lo, hi);
        pos_ = saved;
        return ok;
    }

    PNode parse_quantified() {
        PNode atom = parse_atom();
        if (at_end() || !quantifier_ahead()) return atom;
        if (atom.kind == PNode::Kind::Stripped) throw SyntaxError("nothing to repeat", pos_);

        std::size_t qpos = pos_;
        int lo = 0, hi = 0;
        char c = peek();
        if (c == '*') {
            lo = 0, hi = kUnbounded, ++pos_;
        } else if (c == '+') {
            lo = 1, hi = kUnbounded, ++pos_;
        } else if (c == '?') {
            lo = 0, hi = 1, ++pos_;
        } else {
            try_counted(lo, hi);
            if (hi != kUnbounded && lo > hi)
                throw SyntaxError("min repeat greater than max repeat", qpos);
            if (lo > kMaxRepeat || hi > kMaxRepeat)
                throw SyntaxError("repetition bound too large", qpos);
        }
        // Lazy suffix: same language as the greedy form.
        if (!at_end() && peek() == '?') ++pos_;
        if (!at_end() && quantifier_ahead()) throw SyntaxError("multiple repeat", pos_);

        PNode rep{PNode::Kind::Repeat, {}, {}, lo, hi};
        rep.kids.push_back(std::move(atom));
        return rep;
    }

    void note(Feature f) { features.push_back(f); }

    std::string read_group_name(char terminator) {
        std::size_t start = pos_;
        while (!at_end() && peek() != terminator) ++pos_;
        if (at_end()) throw SyntaxError("unterminated group name", start);
        std::string name(text_.substr(start, pos_ - start));
        if (name.empty()) throw SyntaxError("missing group name", start);
        ++pos_;
        return name;
    }

    PNode finish_group(std::size_t open_pos) {
        PNode inner = parse_alt();
        if (at_end() || peek() != ')') throw SyntaxError("missing ), unterminated subpattern", open_pos);
        ++pos_;
        return inner;
    }

    PNode parse_group() {
        std::size_t open = pos_++;
        if (peek() != '?') {
            int index = ++group_count_;
            groups.push_back({index, std::nullopt});
            return PNode::group(finish_group(open));
        }
        ++pos_;
        if (peek() == ':') {
            ++pos_;
            return PNode::group(finish_group(open));
        }
        if (starts_with("P<") || (peek() == '<' && peek(1) != '=' && peek(1) != '!')) {
            pos_ += peek() == 'P' ? 2 : 1;
            std::string name = read_group_name('>');
            int index = ++group_count_;
            groups.push_back({index, name});
            note(Feature::NamedGroup);
            return PNode::group(finish_group(open));
        }
        if (starts_with("P=")) {
            throw UnsupportedFeature("backreference (?P=...) at position " + std::to_string(open));
        }
        if (peek() == '=' || peek() == '!' || starts_with("<=") || starts_with("<!")) {
            pos_ += peek() == '<' ? 2 : 1;
            finish_group(open);
            note(Feature::Lookaround);
            return PNode::stripped();
        }
        if (peek() == '#') {
            while (!at_end() && peek() != ')') ++pos_;
            if (at_end()) throw SyntaxError("missing ), unterminated comment", open);
            ++pos_;
            return PNode::stripped();
        }
        if (peek() == '(') {
            throw UnsupportedFeature("conditional group at position " + std::to_string(open));
        }
        // Inline flags: (?aiLmsux) or scoped (?i-s:...)
        std::size_t flag_start = pos_;
        while (!at_end() && std::string_view("aiLmsux-").find(peek()) != std::string_view::npos) ++pos_;
        if (pos_ == flag_start) throw SyntaxError("unknown extension ?" + std::string(1, peek()), flag_start);
        note(Feature::Flag);
        if (peek() == ')') {
            ++pos_;
            return PNode::stripped();
        }
        if (peek() == ':') {
            ++pos_;
            return PNode::group(finish_group(open));
        }
        throw SyntaxError("malformed inline flag group", flag_start);
    }

    // Escapes shared by class and non-class context that denote one code
    // point. Returns false if the escape is not of that form.
    bool read_codepoint_escape(char c, std::uint32_t& cp) {
        switch (c) {
        case 't': cp = '\t'; return true;
        case 'n': cp = '\n'; return true;
        case 'r': cp = '\r'; return true;
        case 'f': cp = '\f'; return true;
        case 'v': cp = '\v'; return true;
        case 'a': cp = '\a'; return true;
        case 'x':
        case 'u':
        case 'U': {
            std::size_t len = c == 'x' ? 2 : c == 'u' ? 4 : 8;
            std::size_t start = pos_;
            if (pos_ + len > text_.size()) throw SyntaxError("incomplete escape \\" + std::string(1, c), start);
            cp = 0;
            for (std::size_t i = 0; i < len; ++i) {
                char h = text_[pos_ + i];
                if (!is_hex(h)) throw SyntaxError("incomplete escape \\" + std::string(1, c), start);
                cp = cp * 16 + static_cast<std::uint32_t>(std::stoi(std::string(1, h), nullptr, 16));
            }
            if (cp > 0x10FFFF) throw SyntaxError("bad escape", start);
            pos_ += len;
            return true;
        }
        default: return false;
        }
    }

    // Called with pos_ just after the backslash.
    PNode parse_escape() {
        std::size_t start = pos_ - 1;
        if (at_end()) throw SyntaxError("bad escape (end of pattern)", start);
        char c = text_[pos_++];
        switch (c) {
        case 'd': return PNode::of(CharSet::digit());
        case 'D': return PNode::of(~CharSet::digit());
        case 'w': return PNode::of(CharSet::word());
        case 'W': return PNode::of(~CharSet::word());
        case 's': return PNode::of(CharSet::space());
        case 'S': return PNode::of(~CharSet::space());
        case 'A':
        case 'Z':
        case 'b':
        case 'B':
            note(Feature::Anchor);
            return PNode::stripped();
        default: break;
        }
        if (c == '0') {
            std::uint32_t v = 0;
            for (int i = 0; i < 2 && !at_end() && is_octal(peek()); ++i) v = v * 8 + (text_[pos_++] - '0');
            return PNode::of(CharSet::of(static_cast<unsigned char>(v)));
        }
        if (c >= '1' && c <= '9') {
            if (is_octal(c) && is_octal(peek()) && is_octal(peek(1))) {
                std::uint32_t v = (c - '0') * 64 + (peek() - '0') * 8 + (peek(1) - '0');
                pos_ += 2;
                if (v > 0xFF) throw SyntaxError("octal escape value outside of range", start);
                return PNode::of(CharSet::of(static_cast<unsigned char>(v)));
            }
            throw UnsupportedFeature("backreference \\" + std::string(1, c) + " at position " +
                                     std::to_string(start));
        }
        std::uint32_t cp = 0;
        if (read_codepoint_escape(c, cp)) {
            std::vector<unsigned char> bytes;
            append_utf8(cp, bytes);
            if (bytes.size() == 1) return PNode::of(CharSet::of(bytes[0]));
            PNode seq{PNode::Kind::Concat, {}, {}, 0, 0};
            for (unsigned char b : bytes) seq.kids.push_back(PNode::of(CharSet::of(b)));
            return PNode::group(std::move(seq));
        }
        if (std::isalpha(static_cast<unsigned char>(c))) throw SyntaxError("bad escape \\" + std::string(1, c), start);
        return PNode::of(CharSet::of(static_cast<unsigned char>(c)));
    }

    PNode parse_class() {
        std::size_t open = pos_++;
        bool negate = false;
        if (peek() == '^') {
            negate = true;
            ++pos_;
        }
        CharSet set;
        bool first = true;
        while (true) {
            if (at_end()) throw SyntaxError("unterminated character set", open);
            char c = peek();
            if (c == ']' && !first) {
                ++pos_;
                break;
            }
            first = false;
            std::size_t item_pos = pos_;
            // Single byte of a potential range, or a whole named class.
            std::optional<unsigned char> lo = read_class_atom(set);
            if (!lo) continue;
            if (peek() == '-' && peek(1) != ']' && pos_ + 1 < text_.size()) {
                ++pos_;
                CharSet dummy;
                std::optional<unsigned char> hi = read_class_atom(dummy);
                if (!hi) throw SyntaxError("bad character range", item_pos);
                if (*hi < *lo) throw SyntaxError("bad character range", item_pos);
                set.add_range(*lo, *hi);
            } else {
                set.add(*lo);
            }
        }
        if (negate) set = ~set;
        if (set.empty()) throw SyntaxError("character set matches nothing", open);
        return PNode::of(set);
    }

    // Reads one class member. Named classes (\d etc.) are merged into
    // `set` directly and return nullopt; single bytes are returned.
    std::optional<unsigned char> read_class_atom(CharSet& set) {
        char c = text_[pos_++];
        if (c != '\\') return static_cast<unsigned char>(c);
        std::size_t start = pos_ - 1;
        if (at_end()) throw SyntaxError("unterminated character set", start);
        char e = text_[pos_++];
        switch (e) {
        case 'd': set |= CharSet::digit(); return std::nullopt;
        case 'D': set |= ~CharSet::digit(); return std::nullopt;
        case 'w': set |= CharSet::word(); return std::nullopt;
        case 'W': set |= ~CharSet::word(); return std::nullopt;
        case 's': set |= CharSet::space(); return std::nullopt;
        case 'S': set |= ~CharSet::space(); return std::nullopt;
        case 'b': return static_cast<unsigned char>('\b');
        default: break;
        }
        if (e == '0' || is_octal(e)) {
            std::uint32_t v = e - '0';
            for (int i = 0; i < 2 && !at_end() && is_octal(peek()); ++i) v = v * 8 + (text_[pos_++] - '0');
            if (v > 0xFF) throw SyntaxError("octal escape value outside of range", start);
            return static_cast<unsigned char>(v);
        }
        std::uint32_t cp = 0;
        if (read_codepoint_escape(e, cp)) {
            if (cp > 0xFF) throw SyntaxError("escape above \\xFF inside a character set is not supported", start);
            return static_cast<unsigned char>(cp);
        }
        if (std::isalnum(static_cast<unsigned char>(e))) throw SyntaxError("bad escape \\" + std::string(1, e), start);
        return static_cast<unsigned char>(e);
    }

    PNode parse_atom() {
        char c = peek();
        switch (c) {
        case '(': return parse_group();
        case '[': return parse_class();
        case '.': ++pos_; return PNode::of(CharSet::dot());
        case '^':
        case '$':
            ++pos_;
            note(Feature::Anchor);
            return PNode::stripped();
        case '\\': ++pos_; return parse_escape();
        case '*':
        case '+':
        case '?': throw SyntaxError("nothing to repeat", pos_);
        case '{':
            if (quantifier_ahead()) throw SyntaxError("nothing to repeat", pos_);
            ++pos_;
            return PNode::of(CharSet::of('{'));
        default: ++pos_; return PNode::of(CharSet::of(static_cast<unsigned char>(c)));
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int group_count_ = 0;
};

bool needs_parens(const PNode& n) {
    return n.kind == PNode::Kind::Concat || n.kind == PNode::Kind::Alt || n.kind == PNode::Kind::Repeat;
}

void emit(const PNode& n, std::vector<Token>& out);

void emit_atom(const PNode& n, std::vector<Token>& out) {
    if (needs_parens(n)) out.push_back(Token::lparen());
    emit(n, out);
    if (needs_parens(n)) out.push_back(Token::rparen());
}

void emit_copies(const PNode& atom, int count, std::vector<Token>& out) {
    if (count == 0) {
        out.push_back(Token::epsilon());
        return;
    }
    for (int i = 0; i < count; ++i) {
        if (i > 0) out.push_back(Token::concat());
        emit_atom(atom, out);
    }
}

void emit_repeat(const PNode& n, std::vector<Token>& out) {
    const PNode& atom = n.kids.front();
    if (n.max == kUnbounded) {
        // m copies then a starred copy
        for (int i = 0; i < n.min; ++i) {
            emit_atom(atom, out);
            out.push_back(Token::concat());
        }
        emit_atom(atom, out);
        out.push_back(Token::star());
        return;
    }
    if (n.min == n.max) {
        emit_copies(atom, n.min, out);
        return;
    }
    // {m,n} becomes the alternation of every admissible count.
    out.push_back(Token::lparen());
    for (int k = n.min; k <= n.max; ++k) {
        if (k > n.min) out.push_back(Token::alt());
        emit_copies(atom, k, out);
    }
    out.push_back(Token::rparen());
}

void emit(const PNode& n, std::vector<Token>& out) {
    switch (n.kind) {
    case PNode::Kind::Empty:
    case PNode::Kind::Stripped: out.push_back(Token::epsilon()); break;
    case PNode::Kind::Chars: out.push_back(Token::symbol(n.chars)); break;
    case PNode::Kind::Group:
        out.push_back(Token::lparen());
        emit(n.kids.front(), out);
        out.push_back(Token::rparen());
        break;
    case PNode::Kind::Concat:
        for (std::size_t i = 0; i < n.kids.size(); ++i) {
            if (i > 0) out.push_back(Token::concat());
            emit(n.kids[i], out);
        }
        break;
    case PNode::Kind::Alt:
        for (std::size_t i = 0; i < n.kids.size(); ++i) {
            if (i > 0) out.push_back(Token::alt());
            emit(n.kids[i], out);
        }
        break;
    case PNode::Kind::Repeat: emit_repeat(n, out); break;
    }
}

int precedence(TokenKind k) {
    switch (k) {
    case TokenKind::Star: return 3;
    case TokenKind::Concat: return 2;
    case TokenKind::Alt: return 1;
    default: return 0;
    }
}

std::string join(const std::vector<Token>& tokens) {
    return tokens.empty() ? "-" : to_string(tokens);
}

std::string join_range(const std::vector<Token>& tokens, std::size_t from) {
    if (from >= tokens.size()) return "-";
    return to_string(std::span<const Token>(tokens).subspan(from));
}

}  // namespace

std::string_view feature_name(Feature f) {
    switch (f) {
    case Feature::Anchor: return "anchor";
    case Feature::Lookaround: return "lookaround";
    case Feature::Backreference: return "backreference";
    case Feature::NamedGroup: return "named-group";
    case Feature::Flag: return "flag";
    }
    return "?";
}

std::string Token::to_string() const {
    switch (kind) {
    case TokenKind::Symbol: return chars.to_string();
    case TokenKind::Epsilon: return "ε";
    case TokenKind::Concat: return "&";
    case TokenKind::Alt: return "|";
    case TokenKind::Star: return "*";
    case TokenKind::LParen: return "(";
    case TokenKind::RParen: return ")";
    }
    return "?";
}

std::string to_string(std::span<const Token> tokens) {
    std::string out;
    for (const Token& t : tokens) out += t.to_string();
    return out;
}

std::string token_dump(std::span<const Token> tokens) {
    std::ostringstream os;
    for (const Token& t : tokens) {
        switch (t.kind) {
        case TokenKind::Symbol: os << "SYMBOL " << t.chars.ranges_string(); break;
        case TokenKind::Epsilon: os << "EPSILON"; break;
        case TokenKind::Concat: os << "CONCAT"; break;
        case TokenKind::Alt: os << "ALT"; break;
        case TokenKind::Star: os << "STAR"; break;
        case TokenKind::LParen: os << "LPAREN"; break;
        case TokenKind::RParen: os << "RPAREN"; break;
        }
        os << '\n';
    }
    return os.str();
}

NormalizedExpr parse(std::string_view text) {
    Parser parser(text);
    PNode root = parser.run();
    NormalizedExpr expr;
    emit(root, expr.tokens);
    expr.stripped_features = std::move(parser.features);
    expr.approximate = !expr.stripped_features.empty();
    expr.groups = std::move(parser.groups);
    return expr;
}

NormalizedExpr parse(const RawPattern& raw) { return parse(std::string_view(raw.text)); }

PostfixProgram to_postfix(const NormalizedExpr& expr) { return to_postfix(expr, nullptr); }

PostfixProgram to_postfix(const NormalizedExpr& expr, std::vector<ShuntingYardStep>* trace) {
    const std::vector<Token>& in = expr.tokens;
    std::vector<Token> ops;
    std::vector<Token> out;

    auto record = [&](std::size_t rest_from, const std::string& regarded, std::string reason) {
        if (!trace) return;
        trace->push_back({join_range(in, rest_from), regarded, join(ops), join(out), std::move(reason)});
    };

    record(0, "-", "-");
    for (std::size_t i = 0; i < in.size(); ++i) {
        const Token& t = in[i];
        const std::string name = t.to_string();
        switch (t.kind) {
        case TokenKind::Symbol:
        case TokenKind::Epsilon:
            record(i + 1, name, name + " ∈ Σ");
            out.push_back(t);
            break;
        case TokenKind::LParen:
            record(i + 1, name, "Opening (");
            ops.push_back(t);
            break;
        case TokenKind::RParen:
            while (true) {
                if (ops.empty()) throw MalformedExpression("unbalanced ')' in token stream");
                record(i + 1, name, "Closing )");
                Token top = ops.back();
                ops.pop_back();
                if (top.kind == TokenKind::LParen) break;
                out.push_back(top);
            }
            break;
        case TokenKind::Concat:
        case TokenKind::Alt:
        case TokenKind::Star:
            while (!ops.empty() && ops.back().is_operator() &&
                   precedence(ops.back().kind) >= precedence(t.kind)) {
                record(i + 1, name, "Pop op., " + ops.back().to_string() + " ≥ " + name);
                out.push_back(ops.back());
                ops.pop_back();
            }
            if (!ops.empty() && ops.back().is_operator())
                record(i + 1, name, "op., " + name + " > " + ops.back().to_string());
            else
                record(i + 1, name, "op.");
            ops.push_back(t);
            break;
        }
    }
    while (!ops.empty()) {
        if (ops.back().kind == TokenKind::LParen) throw MalformedExpression("unbalanced '(' in token stream");
        record(in.size(), "-", "Pop op.");
        out.push_back(ops.back());
        ops.pop_back();
    }
    record(in.size(), "-", "-");

    PostfixProgram prog{std::move(out)};
    check_well_formed(prog);
    return prog;
}

void check_well_formed(const PostfixProgram& prog) {
    std::size_t depth = 0;
    for (std::size_t i = 0; i < prog.tokens.size(); ++i) {
        const Token& t = prog.tokens[i];
        switch (t.kind) {
        case TokenKind::Symbol:
        case TokenKind::Epsilon: ++depth; break;
        case TokenKind::Star:
            if (depth < 1) throw MalformedExpression("'*' without operand at postfix index " + std::to_string(i));
            break;
        case TokenKind::Concat:
        case TokenKind::Alt:
            if (depth < 2)
                throw MalformedExpression("'" + t.to_string() + "' without two operands at postfix index " +
                                          std::to_string(i));
            --depth;
            break;
        case TokenKind::LParen:
        case TokenKind::RParen: throw MalformedExpression("parenthesis in postfix program");
        }
    }
    if (depth != 1)
        throw MalformedExpression("postfix program leaves " + std::to_string(depth) + " values on the stack");
}

RegexAst postfix_to_ast(const PostfixProgram& prog) {
    check_well_formed(prog);
    std::vector<RegexAst> stack;
    for (const Token& t : prog.tokens) {
        switch (t.kind) {
        case TokenKind::Symbol: stack.push_back(RegexAst::symbol(t.chars)); break;
        case TokenKind::Epsilon: stack.push_back(RegexAst::epsilon()); break;
        case TokenKind::Star: {
            RegexAst inner = stack.back();
            stack.back() = RegexAst::star(std::move(inner));
            break;
        }
        case TokenKind::Concat:
        case TokenKind::Alt: {
            RegexAst right = stack.back();
            stack.pop_back();
            RegexAst left = stack.back();
            stack.back() = t.kind == TokenKind::Concat ? RegexAst::concat(std::move(left), std::move(right))
                                                       : RegexAst::alt(std::move(left), std::move(right));
            break;
        }
        default: break;
        }
    }
    return stack.front();
}

PostfixProgram parse_postfix(std::string_view text) {
    constexpr std::string_view kEpsilon = "ε";
    PostfixProgram prog;
    std::size_t i = 0;
    auto read_byte = [&](std::size_t& p) -> unsigned char {
        if (text[p] != '\\') return static_cast<unsigned char>(text[p++]);
        if (p + 1 >= text.size()) throw SyntaxError("dangling backslash", p);
        char e = text[p + 1];
        if (e == 'x') {
            if (p + 3 >= text.size() || !is_hex(text[p + 2]) || !is_hex(text[p + 3]))
                throw SyntaxError("bad \\x escape", p);
            auto v = static_cast<unsigned char>(std::stoi(std::string(text.substr(p + 2, 2)), nullptr, 16));
            p += 4;
            return v;
        }
        p += 2;
        switch (e) {
        case 't': return '\t';
        case 'n': return '\n';
        case 'r': return '\r';
        case 'f': return '\f';
        case 'v': return '\v';
        default: return static_cast<unsigned char>(e);
        }
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == ' ') {
            ++i;
        } else if (text.substr(i).starts_with(kEpsilon)) {
            prog.tokens.push_back(Token::epsilon());
            i += kEpsilon.size();
        } else if (c == '&') {
            prog.tokens.push_back(Token::concat()), ++i;
        } else if (c == '|') {
            prog.tokens.push_back(Token::alt()), ++i;
        } else if (c == '*') {
            prog.tokens.push_back(Token::star()), ++i;
        } else if (c == '[') {
            std::size_t open = i++;
            CharSet set;
            while (i < text.size() && text[i] != ']') {
                unsigned char lo = read_byte(i);
                unsigned char hi = lo;
                if (i < text.size() && text[i] == '-' && i + 1 < text.size() && text[i + 1] != ']') {
                    ++i;
                    hi = read_byte(i);
                }
                if (hi < lo) throw SyntaxError("bad range in postfix class", open);
                set.add_range(lo, hi);
            }
            if (i >= text.size()) throw SyntaxError("unterminated class in postfix text", open);
            ++i;
            if (set.empty()) throw SyntaxError("empty class in postfix text", open);
            prog.tokens.push_back(Token::symbol(set));
        } else {
            prog.tokens.push_back(Token::symbol(read_byte(i)));
        }
    }
    check_well_formed(prog);
    return prog;
}

}  // namespace rexincl
