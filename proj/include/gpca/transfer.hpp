#pragma once

#include "gpca/measure.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>

namespace gpca {

// Source window read by the output word of length k at `anchor`: the pairs starting at
// e(n) = n (n even) or n+1 (n odd) for n = anchor .. anchor+k-1.
struct SourceWindow {
    long start;   // first source site, always even
    int span;     // number of source sites
    int variant;  // 1: odd anchor, even k; 2: odd/odd; 3: even/even; 4: even/odd
};

SourceWindow source_window(long anchor, int length);

// Pair-by-pair evaluation: each source pair contributes sum_class phi-product * pair_class matrix.
template <class Scalar>
Scalar pushforward_word(const CylinderMeasure<Scalar>& mu, const Word& word, long anchor, const Params& params) {
    std::array<SymbolDistribution, 3> phi;
    for (int c = 0; c < 3; ++c) phi[c] = class_rule_distribution(static_cast<PairClass>(c), params);
    const auto win = source_window(anchor, static_cast<int>(word.size()));
    const long last = anchor + static_cast<long>(word.size()) - 1;
    RowVec<Scalar> v = mu.left(0);
    for (long s = win.start; s < win.start + win.span; s += 2) {
        Mat<Scalar> g = Mat<Scalar>::Zero(mu.bond(0), mu.bond(0));
        for (int c = 0; c < 3; ++c) {
            Rational w = 1;
            for (long n : {s - 1, s}) {
                if (n < anchor || n > last) continue;
                w *= phi[c][word[n - anchor]];
            }
            if (w != 0) g += scalar_from<Scalar>(w) * mu.pair_class(0, static_cast<PairClass>(c));
        }
        v = v * g;
    }
    return v.dot(mu.right(0));
}

template <class Scalar>
Scalar pushforward_probability(const CylinderMeasure<Scalar>& mu, const CylinderPattern& pattern,
                               const Params& params) {
    Scalar total(0);
    for (const auto& w : pattern.expansions()) total += pushforward_word(mu, w, pattern.anchor(), params);
    return total;
}

using WordFunction = std::function<Rational(const Word&, long)>;

struct PropertyResult {
    bool holds = true;
    std::string counterexample;  // first failing equality, human readable
    std::size_t checked = 0;
};

struct SymmetryReport {
    std::array<PropertyResult, 4> property;  // (i) .. (iv)
    bool all() const;
};

// (i)   f(w)_{i+2} = sum_{x,y} f(xyw)_i
// (ii)  f(w)_i = f(reverse w)_i for even |w|
// (iii) f(w)_i = f(reverse w)_{i+1} for odd |w|
// (iv)  f(w)_i = f(w with b_j, b_{j+1} transposed)_i whenever i+j is even
SymmetryReport check_symmetry(const WordFunction& f, int max_k);

SymmetryReport check_symmetry_properties(const ExactMeasure& mu, int max_k);

// Properties of E mu, evaluated through pushforward_probability.
SymmetryReport symmetry_preservation_check(const ExactMeasure& mu, const Params& params, int max_k);

// Random exact measures. Seeds index a keyed stream, so results are reproducible.
MarkovChainSpec<Rational> random_markov_spec(std::uint64_t seed);

// Retries seeds seed, seed+1, ... until the stationary vector is unique.
ExactMeasure random_markov_measure(std::uint64_t seed);

// Exact solve of pi P = pi, sum pi = 1; nullopt if the solution is not unique.
std::optional<RowVec<Rational>> stationary_vector(const Mat<Rational>& P);

// Blocks (2n-1, 2n) driven by a reversible hidden chain; within a block the pair is drawn
// from a symmetric joint law that depends on the hidden state. Satisfies (i)-(iv).
ExactMeasure random_block_measure(std::uint64_t seed, int hidden_states);

// Text format: pi row, then three M0 rows, then three M1 rows; '#' starts a comment.
MarkovChainSpec<Rational> parse_markov_spec(std::istream& in);

}  // namespace gpca
