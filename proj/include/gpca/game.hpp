#pragma once

#include "gpca/rules.hpp"

#include <optional>
#include <vector>

namespace gpca {

class MarkGrid {
public:
    MarkGrid(std::size_t width, std::size_t height);

    std::size_t width() const { return width_; }
    std::size_t height() const { return height_; }
    SiteMark& at(std::size_t x, std::size_t y) { return marks_[y * width_ + x]; }
    SiteMark at(std::size_t x, std::size_t y) const { return marks_[y * width_ + x]; }
    std::vector<SiteMark> row(std::size_t y) const;
    void set_row(std::size_t y, const std::vector<SiteMark>& row);

private:
    std::size_t width_, height_;
    std::vector<SiteMark> marks_;
};

// Rows 0..H; row H is the all-D horizon. W, L, D are stored as 0, 1, ?.
struct LabelGrid {
    std::vector<RingConfig> rows;

    Symbol at(std::size_t x, std::size_t y) const { return rows[y][x]; }
};

char label_char(Symbol s);

MarkGrid sample_mark_grid(const Params& params, std::size_t width, std::size_t height, std::uint64_t seed);

LabelGrid backward_induce_labels(const MarkGrid& grid);

struct EquivalenceReport {
    bool equal = true;
    std::optional<std::size_t> first_mismatch_row;
};

EquivalenceReport check_game_gpca_equivalence(const MarkGrid& grid);

struct Estimate {
    double mean = 0;
    double ci95 = 0;  // half-width
    std::size_t samples = 0;
};

Estimate mean_with_ci(const std::vector<double>& values);

Estimate estimate_draw_probability(const Params& params, std::size_t width, std::size_t height,
                                   std::size_t samples, std::uint64_t seed);

}  // namespace gpca
