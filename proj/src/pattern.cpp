#include "gpca/pattern.hpp"

#include <stdexcept>

namespace gpca {

Word parse_word(std::string_view text) {
    Word w;
    for (char c : text) w.push_back(symbol_from_char(c));
    return w;
}

std::string word_string(const Word& w) {
    std::string s;
    for (auto b : w) s += to_char(b);
    return s;
}

CylinderPattern::CylinderPattern(std::vector<Atom> atoms, long anchor)
    : atoms_(std::move(atoms)), anchor_(anchor) {}

CylinderPattern::CylinderPattern(std::string_view text, long anchor) : anchor_(anchor) {
    for (std::size_t i = 0; i < text.size();) {
        if (text[i] == '[') {
            auto tok = text.substr(i, 4);
            if (tok == "[**]") atoms_.push_back({AtomKind::StarStar, Symbol::Zero});
            else if (tok == "[1*]") atoms_.push_back({AtomKind::OneStar, Symbol::Zero});
            else throw std::invalid_argument("bad pair class in pattern '" + std::string(text) +
                                             "' (use [**] or [1*])");
            i += 4;
        } else {
            atoms_.push_back({AtomKind::Letter, symbol_from_char(text[i])});
            ++i;
        }
    }
    if (atoms_.empty()) throw std::invalid_argument("empty pattern");
}

CylinderPattern CylinderPattern::of_word(const Word& w, long anchor) {
    std::vector<Atom> atoms;
    for (auto b : w) atoms.push_back({AtomKind::Letter, b});
    return {std::move(atoms), anchor};
}

int CylinderPattern::span() const {
    int k = 0;
    for (const auto& a : atoms_) k += a.width();
    return k;
}

bool CylinderPattern::is_word() const {
    for (const auto& a : atoms_)
        if (a.kind != AtomKind::Letter) return false;
    return true;
}

Word CylinderPattern::word() const {
    if (!is_word()) throw std::logic_error("pattern " + str() + " has pair classes");
    Word w;
    for (const auto& a : atoms_) w.push_back(a.letter);
    return w;
}

std::string CylinderPattern::body() const {
    std::string s;
    for (const auto& a : atoms_) {
        switch (a.kind) {
            case AtomKind::Letter: s += to_char(a.letter); break;
            case AtomKind::StarStar: s += "[**]"; break;
            case AtomKind::OneStar: s += "[1*]"; break;
        }
    }
    return s;
}

std::string CylinderPattern::str() const { return "(" + body() + ")_" + std::to_string(anchor_); }

const std::vector<std::pair<Symbol, Symbol>>& class_members(PairClass c) {
    static const auto table = [] {
        std::array<std::vector<std::pair<Symbol, Symbol>>, 3> t;
        for (auto a : kSymbols)
            for (auto b : kSymbols) t[static_cast<int>(classify_pair(a, b))].push_back({a, b});
        return t;
    }();
    return table[static_cast<int>(c)];
}

std::vector<Word> CylinderPattern::expansions() const {
    std::vector<Word> out{Word{}};
    for (const auto& a : atoms_) {
        std::vector<Word> next;
        for (const auto& w : out) {
            if (a.kind == AtomKind::Letter) {
                next.push_back(w);
                next.back().push_back(a.letter);
                continue;
            }
            auto cls = a.kind == AtomKind::StarStar ? PairClass::StarStar : PairClass::OneStar;
            for (auto [x, y] : class_members(cls)) {
                next.push_back(w);
                next.back().push_back(x);
                next.back().push_back(y);
            }
        }
        out = std::move(next);
    }
    return out;
}

void for_each_word(int length, const std::function<void(const Word&)>& f) {
    Word w(length, Symbol::Zero);
    while (true) {
        f(w);
        int i = length - 1;
        while (i >= 0 && w[i] == Symbol::One) w[i--] = Symbol::Zero;
        if (i < 0) return;
        w[i] = static_cast<Symbol>(static_cast<int>(w[i]) + 1);
    }
}

}  // namespace gpca
