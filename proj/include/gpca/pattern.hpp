#pragma once

#include "gpca/rules.hpp"

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace gpca {

enum class AtomKind : std::uint8_t { Letter, StarStar, OneStar };

struct Atom {
    AtomKind kind = AtomKind::Letter;
    Symbol letter = Symbol::Zero;

    int width() const { return kind == AtomKind::Letter ? 1 : 2; }
    bool operator==(const Atom&) const = default;
};

using Word = std::vector<Symbol>;

Word parse_word(std::string_view text);
std::string word_string(const Word& w);

// Text form: letters 0 ? 1, and the pair classes written [**] and [1*].
// Example: "00[**][1*]" anchored at 0.
class CylinderPattern {
public:
    CylinderPattern() = default;
    CylinderPattern(std::vector<Atom> atoms, long anchor);
    CylinderPattern(std::string_view text, long anchor);
    static CylinderPattern of_word(const Word& w, long anchor);

    const std::vector<Atom>& atoms() const { return atoms_; }
    long anchor() const { return anchor_; }
    int parity() const { return static_cast<int>(((anchor_ % 2) + 2) % 2); }
    int span() const;
    bool is_word() const;
    Word word() const;  // requires is_word()
    std::string str() const;  // "(00[**])_0"
    std::string body() const;

    // Every letter word in the pattern's set, in lexicographic order.
    std::vector<Word> expansions() const;

    bool operator==(const CylinderPattern&) const = default;
    auto operator<=>(const CylinderPattern& o) const {
        if (auto c = anchor_ <=> o.anchor_; c != 0) return c;
        return body() <=> o.body();
    }

private:
    std::vector<Atom> atoms_;
    long anchor_ = 0;
};

// Member pairs of a class, in order.
const std::vector<std::pair<Symbol, Symbol>>& class_members(PairClass c);

void for_each_word(int length, const std::function<void(const Word&)>& f);

}  // namespace gpca
