#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rexincl/ast.hpp"
#include "rexincl/charset.hpp"

namespace rexincl {

using RuleId = std::int64_t;

enum class TokenKind { Symbol, Epsilon, Concat, Alt, Star, LParen, RParen };

struct Token {
    TokenKind kind = TokenKind::Epsilon;
    CharSet chars;  // only for Symbol

    static Token symbol(CharSet chars) { return {TokenKind::Symbol, chars}; }
    static Token symbol(unsigned char c) { return {TokenKind::Symbol, CharSet::of(c)}; }
    static Token epsilon() { return {TokenKind::Epsilon, {}}; }
    static Token concat() { return {TokenKind::Concat, {}}; }
    static Token alt() { return {TokenKind::Alt, {}}; }
    static Token star() { return {TokenKind::Star, {}}; }
    static Token lparen() { return {TokenKind::LParen, {}}; }
    static Token rparen() { return {TokenKind::RParen, {}}; }

    bool is_operand() const { return kind == TokenKind::Symbol || kind == TokenKind::Epsilon; }
    bool is_operator() const {
        return kind == TokenKind::Concat || kind == TokenKind::Alt || kind == TokenKind::Star;
    }
    std::string to_string() const;
    bool operator==(const Token&) const = default;
};

// Constructs that have no exact counterpart in the formal grammar.
enum class Feature { Anchor, Lookaround, Backreference, NamedGroup, Flag };

std::string_view feature_name(Feature f);

struct RawPattern {
    std::string text;
    std::optional<RuleId> source_id;
};

struct CaptureGroup {
    int index = 0;
    std::optional<std::string> name;
};

// Infix token stream over the five formal constructs plus parentheses.
struct NormalizedExpr {
    std::vector<Token> tokens;
    bool approximate = false;
    std::vector<Feature> stripped_features;
    std::vector<CaptureGroup> groups;
};

struct PostfixProgram {
    std::vector<Token> tokens;
};

// One row of the shunting-yard trace. Stacks are shown as they are when
// the row's token is regarded; `reason` names the rule that produces the
// next row.
struct ShuntingYardStep {
    std::string input;
    std::string regarded;
    std::string operator_stack;
    std::string output;
    std::string reason;
};

// Expands the practical dialect (classes, escapes, counted repetition,
// + and ?) into the formal constructs with explicit '&' concatenation.
// An unescaped '&' is accepted as explicit concatenation; write \& for
// a literal ampersand.
NormalizedExpr parse(const RawPattern& raw);
NormalizedExpr parse(std::string_view text);

PostfixProgram to_postfix(const NormalizedExpr& expr);
PostfixProgram to_postfix(const NormalizedExpr& expr, std::vector<ShuntingYardStep>* trace);

// Throws MalformedExpression unless the program evaluates to exactly one
// value without underflow.
void check_well_formed(const PostfixProgram& prog);

RegexAst postfix_to_ast(const PostfixProgram& prog);

// Reads formal postfix text such as "ba|ab|*&". Every byte is a symbol
// except the operators & | *, the epsilon sign, whitespace, bracketed
// range lists like [0-9a-f] and backslash escapes.
PostfixProgram parse_postfix(std::string_view text);

// Compact spelling, e.g. "(b|a)&(a|b)*" or "ba|ab|*&".
std::string to_string(std::span<const Token> tokens);
// One token per line: KIND followed by the symbol's sorted ranges.
std::string token_dump(std::span<const Token> tokens);

}  // namespace rexincl
