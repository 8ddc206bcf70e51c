#include "rexincl/ast.hpp"

#include <algorithm>
#include <cassert>

namespace rexincl {

RegexAst RegexAst::epsilon() {
    return RegexAst(std::make_shared<const Node>(Node{Kind::Epsilon, {}, nullptr, nullptr}));
}

RegexAst RegexAst::symbol(CharSet chars) {
    assert(!chars.empty());
    return RegexAst(std::make_shared<const Node>(Node{Kind::Symbol, chars, nullptr, nullptr}));
}

RegexAst RegexAst::concat(RegexAst left, RegexAst right) {
    return RegexAst(std::make_shared<const Node>(
        Node{Kind::Concat, {}, std::make_shared<const RegexAst>(std::move(left)),
             std::make_shared<const RegexAst>(std::move(right))}));
}

RegexAst RegexAst::alt(RegexAst left, RegexAst right) {
    return RegexAst(std::make_shared<const Node>(
        Node{Kind::Alt, {}, std::make_shared<const RegexAst>(std::move(left)),
             std::make_shared<const RegexAst>(std::move(right))}));
}

RegexAst RegexAst::star(RegexAst inner) {
    return RegexAst(std::make_shared<const Node>(
        Node{Kind::Star, {}, std::make_shared<const RegexAst>(std::move(inner)), nullptr}));
}

CharSet RegexAst::alphabet() const {
    switch (kind()) {
    case Kind::Epsilon: return {};
    case Kind::Symbol: return chars();
    case Kind::Star: return left().alphabet();
    case Kind::Concat:
    case Kind::Alt: return left().alphabet() | right().alphabet();
    }
    return {};
}

std::size_t RegexAst::depth() const {
    switch (kind()) {
    case Kind::Epsilon:
    case Kind::Symbol: return 1;
    case Kind::Star: return 1 + left().depth();
    case Kind::Concat:
    case Kind::Alt: return 1 + std::max(left().depth(), right().depth());
    }
    return 0;
}

std::string RegexAst::to_string() const {
    switch (kind()) {
    case Kind::Epsilon: return "ε";
    case Kind::Symbol: return chars().to_string();
    case Kind::Star: return "(" + left().to_string() + ")*";
    case Kind::Concat: return "(" + left().to_string() + "&" + right().to_string() + ")";
    case Kind::Alt: return "(" + left().to_string() + "|" + right().to_string() + ")";
    }
    return {};
}

bool RegexAst::operator==(const RegexAst& other) const {
    if (node_ == other.node_) return true;
    if (kind() != other.kind()) return false;
    switch (kind()) {
    case Kind::Epsilon: return true;
    case Kind::Symbol: return chars() == other.chars();
    case Kind::Star: return left() == other.left();
    case Kind::Concat:
    case Kind::Alt: return left() == other.left() && right() == other.right();
    }
    return false;
}

}  // namespace rexincl
