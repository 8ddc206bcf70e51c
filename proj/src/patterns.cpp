#include "rexincl/patterns.hpp"

#include <cctype>
#include <regex>
#include <set>

namespace rexincl {

namespace {

struct BracketClass {
    std::string members;  // literal members, ranges written as "a-z"
    bool negated = false;
    std::string_view after;  // text following the closing bracket
};

std::vector<BracketClass> bracket_classes(std::string_view p) {
    std::vector<BracketClass> out;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == '\\') {
            ++i;
            continue;
        }
        if (p[i] != '[') continue;
        BracketClass c;
        std::size_t j = i + 1;
        if (j < p.size() && p[j] == '^') {
            c.negated = true;
            ++j;
        }
        bool first = true;
        for (; j < p.size() && (p[j] != ']' || first); ++j) {
            first = false;
            if (p[j] == '\\' && j + 1 < p.size()) {
                c.members += p[j];
                c.members += p[++j];
                continue;
            }
            c.members += p[j];
        }
        if (j >= p.size()) break;
        c.after = p.substr(j + 1);
        out.push_back(std::move(c));
        i = j;
    }
    return out;
}

bool is_case_pair(const BracketClass& c) {
    if (c.negated || c.members.size() != 2) return false;
    const unsigned char a = c.members[0], b = c.members[1];
    return std::isalpha(a) && std::isalpha(b) && a != b && std::tolower(a) == std::tolower(b);
}

bool is_word_context(const BracketClass& c) {
    if (c.negated || (c.members != "a-zA-Z" && c.members != "A-Za-z")) return false;
    static const std::regex repeat(R"(^(\+|\{([0-9]+)(,[0-9]*)?\}))");
    std::cmatch m;
    if (!std::regex_search(c.after.data(), c.after.data() + c.after.size(), m, repeat)) return false;
    if (m[1] == "+") return true;
    return std::stoi(m[2].str()) >= 2;
}

bool is_si_prefix(const BracketClass& c) {
    static const std::set<std::string> prefixes = {"\xC2\xB5", "k", "m", "n", "d", "c", "p", "f", "a", "z",
                                                   "y", "h", "M", "G", "T", "P", "E", "Z", "Y"};
    if (c.negated || c.after.empty() || c.after.front() != '?') return false;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < c.members.size(); ++i) {
        std::string ch(1, c.members[i]);
        if (static_cast<unsigned char>(c.members[i]) == 0xC2 && i + 1 < c.members.size()) ch += c.members[++i];
        if (prefixes.contains(ch)) seen.insert(ch);
    }
    return seen.size() >= 6;
}

}  // namespace

std::vector<std::string> pattern_tags(std::string_view pattern) {
    static const std::regex optional_decimal(R"(\((\\s\?)?\\\.(\\s\?)?\\d[^()]*\)\?)");
    static const std::regex optional_spacing(R"(\\s\?(\\.|\[[^\]]+\]|[^\\\[\]()|?*+{}])\\s\?)");

    const std::string text(pattern);
    const auto classes = bracket_classes(pattern);
    auto any = [&](auto pred) {
        for (const auto& c : classes) {
            if (pred(c)) return true;
        }
        return false;
    };

    std::vector<std::string> tags;
    if (std::regex_search(text, optional_decimal)) tags.emplace_back("optional-decimal");
    if (std::regex_search(text, optional_spacing)) tags.emplace_back("optional-spacing");
    if (any(is_case_pair)) tags.emplace_back("case-pair");
    if (any(is_word_context)) tags.emplace_back("word-context");
    if (any(is_si_prefix)) tags.emplace_back("si-prefix");
    return tags;
}

std::map<std::string, std::size_t> analyze_patterns(const std::vector<Rule>& rules) {
    std::map<std::string, std::size_t> counts;
    for (std::string_view tag : kPatternTags) counts[std::string(tag)] = 0;
    for (const Rule& r : rules) {
        for (const std::string& tag : pattern_tags(r.pattern)) ++counts[tag];
    }
    return counts;
}

}  // namespace rexincl
