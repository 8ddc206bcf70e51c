#pragma once

#include <bitset>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace rexincl {

// A set of byte values. Patterns and text are handled as bytes; the named
// classes below are ASCII-only.
class CharSet {
public:
    static constexpr std::size_t kSize = 256;

    CharSet() = default;

    static CharSet of(unsigned char c);
    static CharSet range(unsigned char lo, unsigned char hi);
    static CharSet all();

    static CharSet digit();   // \d
    static CharSet word();    // \w
    static CharSet space();   // \s
    static CharSet dot();     // .

    void add(unsigned char c) { bits_.set(c); }
    void add_range(unsigned char lo, unsigned char hi);
    bool contains(unsigned char c) const { return bits_.test(c); }
    bool empty() const { return bits_.none(); }
    std::size_t size() const { return bits_.count(); }
    // Lowest member; the set must be non-empty.
    unsigned char lowest() const;

    bool intersects(const CharSet& other) const { return (bits_ & other.bits_).any(); }
    bool subset_of(const CharSet& other) const { return (bits_ & ~other.bits_).none(); }

    CharSet operator|(const CharSet& o) const { return CharSet(bits_ | o.bits_); }
    CharSet operator&(const CharSet& o) const { return CharSet(bits_ & o.bits_); }
    CharSet operator-(const CharSet& o) const { return CharSet(bits_ & ~o.bits_); }
    CharSet operator~() const { return CharSet(~bits_); }
    CharSet& operator|=(const CharSet& o) { bits_ |= o.bits_; return *this; }

    bool operator==(const CharSet& o) const { return bits_ == o.bits_; }
    bool operator<(const CharSet& o) const;

    std::vector<std::pair<unsigned char, unsigned char>> ranges() const;
    std::vector<unsigned char> members() const;

    // Compact spelling: a lone printable char as itself, otherwise a
    // bracketed list of sorted ranges such as [0-9A-Z_a-z].
    std::string to_string() const;
    // Always bracketed ranges, used by token dumps.
    std::string ranges_string() const;

    std::size_t hash() const { return std::hash<std::bitset<kSize>>{}(bits_); }

private:
    explicit CharSet(std::bitset<kSize> bits) : bits_(bits) {}

    std::bitset<kSize> bits_;
};

// Printable spelling of one byte; escapes control and non-ASCII bytes.
std::string spell_byte(unsigned char c);

}  // namespace rexincl

template <>
struct std::hash<rexincl::CharSet> {
    std::size_t operator()(const rexincl::CharSet& s) const noexcept { return s.hash(); }
};
