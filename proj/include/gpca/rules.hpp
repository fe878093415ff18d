#pragma once

#include "gpca/rational.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gpca {

// Numeric values follow the linear order 0 < ? < 1.
enum class Symbol : std::uint8_t { Zero = 0, Question = 1, One = 2 };
enum class SiteMark : std::uint8_t { Trap = 0, Target = 1, Open = 2 };

inline constexpr std::array<Symbol, 3> kSymbols{Symbol::Zero, Symbol::Question, Symbol::One};

char to_char(Symbol s);
Symbol symbol_from_char(char c);
char to_char(SiteMark m);

inline bool linear_leq(Symbol a, Symbol b) { return a <= b; }
inline bool flat_leq(Symbol a, Symbol b) { return a == b || b == Symbol::Question; }

// Classes of a source pair: (0,0), {0,?}^2 minus (0,0), and everything touching a 1.
enum class PairClass : std::uint8_t { Zeros = 0, StarStar = 1, OneStar = 2 };

PairClass classify_pair(Symbol a, Symbol b);

class Params {
public:
    Params(Rational p, Rational q);

    const Rational& p() const { return p_; }
    const Rational& q() const { return q_; }
    const Rational& r() const { return r_; }

    bool operator==(const Params&) const = default;

private:
    Rational p_, q_, r_;
};

std::string to_string(const Params& params);

struct SymbolDistribution {
    std::array<Rational, 3> prob{};

    Rational& operator[](Symbol s) { return prob[static_cast<int>(s)]; }
    const Rational& operator[](Symbol s) const { return prob[static_cast<int>(s)]; }
    Rational total() const { return prob[0] + prob[1] + prob[2]; }
    bool operator==(const SymbolDistribution&) const = default;
};

enum class RuleSet { Base, Envelope };

SymbolDistribution local_rule_distribution(Symbol a, Symbol b, const Params& params,
                                           RuleSet rules = RuleSet::Envelope);

// Same table indexed by class; Zeros/StarStar/OneStar rows.
SymbolDistribution class_rule_distribution(PairClass c, const Params& params);

Symbol deterministic_site_update(Symbol a, Symbol b, SiteMark mark);

class RingConfig {
public:
    RingConfig() = default;
    explicit RingConfig(std::vector<Symbol> cells);
    RingConfig(std::size_t length, Symbol fill);

    static RingConfig parse(std::string_view text);

    std::size_t size() const { return cells_.size(); }
    Symbol operator[](std::size_t i) const { return cells_[i % cells_.size()]; }
    const std::vector<Symbol>& cells() const { return cells_; }
    std::size_t count(Symbol s) const;
    std::string str() const;

    bool operator==(const RingConfig&) const = default;

private:
    std::vector<Symbol> cells_;
};

// Index of the first cell of the pair read by site n (n for even n, n+1 for odd n).
inline std::size_t source_cell(std::size_t n) { return n % 2 == 0 ? n : n + 1; }

RingConfig deterministic_row_update(const RingConfig& config, std::span<const SiteMark> marks);

// Stateless generator: every draw is a pure function of (seed, stream, t, site).
class KeyedStream {
public:
    enum class Tag : std::uint64_t { Lattice = 1, Game = 2, Measure = 3, Sampling = 4 };

    explicit KeyedStream(std::uint64_t seed, Tag tag = Tag::Lattice) : seed_(seed), tag_(tag) {}

    std::uint64_t bits(std::uint64_t t, std::uint64_t site) const;
    double uniform(std::uint64_t t, std::uint64_t site) const;
    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    Tag tag_;
};

class MarkSampler {
public:
    explicit MarkSampler(const Params& params);

    SiteMark operator()(std::uint64_t u) const {
        if (u < trap_) return SiteMark::Trap;
        if (u < target_) return SiteMark::Target;
        return SiteMark::Open;
    }

private:
    // Thresholds floor(p 2^64) and floor((p+q) 2^64); 2^64 itself needs the extra bit.
    unsigned __int128 trap_, target_;
};

std::vector<SiteMark> sample_mark_row(const MarkSampler& sampler, const KeyedStream& stream,
                                      std::uint64_t t, std::size_t length);

RingConfig stochastic_step(const RingConfig& config, const Params& params, const KeyedStream& stream,
                           std::uint64_t t);

}  // namespace gpca
