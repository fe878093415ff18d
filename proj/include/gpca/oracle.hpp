#pragma once

#include "gpca/measure.hpp"

#include <vector>

namespace gpca {

// Law of a ring configuration; index = sum_n symbol(n) * 3^n.
struct RowDistribution {
    std::size_t width = 0;
    std::vector<Rational> prob;

    Rational question_density() const;
    RingConfig config(std::size_t index) const;
};

struct RingEvolution {
    std::vector<RowDistribution> laws;  // t = 0..T, starting from all-?
    std::vector<Rational> question_density;
};

RingEvolution exact_ring_distribution_evolution(const Params& params, std::size_t width, std::size_t steps);

// Brute force over every source word of the window, with weights from the rule table.
Rational exhaustive_pushforward_check(const ExactMeasure& mu, const CylinderPattern& pattern, const Params& params);

Rational exact_draw_probability_small(const Params& params, std::size_t width, std::size_t height);

}  // namespace gpca
