#pragma once

#include <memory>
#include <string>

#include "rexincl/charset.hpp"

namespace rexincl {

// Formal regular expression over the five constructs: epsilon, symbol
// (a non-empty byte set), concatenation, alternation and Kleene star.
class RegexAst {
public:
    enum class Kind { Epsilon, Symbol, Concat, Alt, Star };

    static RegexAst epsilon();
    static RegexAst symbol(CharSet chars);
    static RegexAst symbol(unsigned char c) { return symbol(CharSet::of(c)); }
    static RegexAst concat(RegexAst left, RegexAst right);
    static RegexAst alt(RegexAst left, RegexAst right);
    static RegexAst star(RegexAst inner);

    Kind kind() const { return node_->kind; }
    const CharSet& chars() const { return node_->chars; }
    // Operands: left() for Star is the starred expression.
    const RegexAst& left() const { return *node_->left; }
    const RegexAst& right() const { return *node_->right; }

    // Union of all symbol sets in the tree.
    CharSet alphabet() const;
    std::size_t depth() const;
    // Fully parenthesised infix spelling, e.g. ((b|a)&((a|b))*).
    std::string to_string() const;

    bool operator==(const RegexAst& other) const;

private:
    struct Node {
        Kind kind;
        CharSet chars;
        std::shared_ptr<const RegexAst> left;
        std::shared_ptr<const RegexAst> right;
    };

    explicit RegexAst(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    std::shared_ptr<const Node> node_;
};

}  // namespace rexincl
