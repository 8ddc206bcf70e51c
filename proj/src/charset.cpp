#include "rexincl/charset.hpp"

#include <cassert>
#include <cstdio>
#include <string_view>

namespace rexincl {

CharSet CharSet::of(unsigned char c) {
    CharSet s;
    s.add(c);
    return s;
}

CharSet CharSet::range(unsigned char lo, unsigned char hi) {
    CharSet s;
    s.add_range(lo, hi);
    return s;
}

CharSet CharSet::all() {
    std::bitset<kSize> b;
    b.set();
    return CharSet(b);
}

CharSet CharSet::digit() { return range('0', '9'); }

CharSet CharSet::word() {
    CharSet s = range('a', 'z') | range('A', 'Z') | range('0', '9');
    s.add('_');
    return s;
}

CharSet CharSet::space() {
    CharSet s;
    for (unsigned char c : {' ', '\t', '\r', '\n', '\f', '\v'}) s.add(c);
    return s;
}

CharSet CharSet::dot() { return all() - of('\n'); }

void CharSet::add_range(unsigned char lo, unsigned char hi) {
    for (unsigned c = lo; c <= hi; ++c) bits_.set(c);
}

unsigned char CharSet::lowest() const {
    assert(!empty());
    for (std::size_t c = 0; c < kSize; ++c)
        if (bits_.test(c)) return static_cast<unsigned char>(c);
    return 0;
}

bool CharSet::operator<(const CharSet& o) const {
    for (std::size_t c = 0; c < kSize; ++c) {
        if (bits_.test(c) != o.bits_.test(c)) return bits_.test(c);
    }
    return false;
}

std::vector<std::pair<unsigned char, unsigned char>> CharSet::ranges() const {
    std::vector<std::pair<unsigned char, unsigned char>> out;
    std::size_t c = 0;
    while (c < kSize) {
        if (!bits_.test(c)) {
            ++c;
            continue;
        }
        std::size_t end = c;
        while (end + 1 < kSize && bits_.test(end + 1)) ++end;
        out.emplace_back(static_cast<unsigned char>(c), static_cast<unsigned char>(end));
        c = end + 1;
    }
    return out;
}

std::vector<unsigned char> CharSet::members() const {
    std::vector<unsigned char> out;
    for (std::size_t c = 0; c < kSize; ++c)
        if (bits_.test(c)) out.push_back(static_cast<unsigned char>(c));
    return out;
}

std::string spell_byte(unsigned char c) {
    switch (c) {
    case '\t': return "\\t";
    case '\n': return "\\n";
    case '\r': return "\\r";
    case '\f': return "\\f";
    case '\v': return "\\v";
    case '\\': return "\\\\";
    default: break;
    }
    if (c < 0x20 || c >= 0x7f) {
        char buf[8];
        std::snprintf(buf, sizeof buf, "\\x%02X", c);
        return buf;
    }
    return std::string(1, static_cast<char>(c));
}

std::string CharSet::ranges_string() const {
    std::string out = "[";
    for (auto [lo, hi] : ranges()) {
        out += spell_byte(lo);
        if (hi != lo) {
            if (hi != lo + 1) out += '-';
            out += spell_byte(hi);
        }
    }
    out += ']';
    return out;
}

std::string CharSet::to_string() const {
    if (size() == 1) {
        unsigned char c = lowest();
        constexpr std::string_view kReserved = "[]&|*()\\";
        if (c > 0x20 && c < 0x7f && kReserved.find(static_cast<char>(c)) == std::string_view::npos)
            return std::string(1, static_cast<char>(c));
    }
    return ranges_string();
}

}  // namespace rexincl
