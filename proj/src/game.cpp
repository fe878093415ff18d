#include "gpca/game.hpp"

#include <cmath>
#include <stdexcept>

namespace gpca {

MarkGrid::MarkGrid(std::size_t width, std::size_t height)
    : width_(width), height_(height), marks_(width * height, SiteMark::Open) {
    if (width == 0 || width % 2 != 0)
        throw std::invalid_argument("grid width must be even and positive, got " + std::to_string(width));
}

std::vector<SiteMark> MarkGrid::row(std::size_t y) const {
    return {marks_.begin() + y * width_, marks_.begin() + (y + 1) * width_};
}

void MarkGrid::set_row(std::size_t y, const std::vector<SiteMark>& row) {
    if (row.size() != width_) throw std::invalid_argument("row width mismatch");
    std::copy(row.begin(), row.end(), marks_.begin() + y * width_);
}

char label_char(Symbol s) {
    switch (s) {
        case Symbol::Zero: return 'W';
        case Symbol::One: return 'L';
        case Symbol::Question: return 'D';
    }
    return '#';
}

MarkGrid sample_mark_grid(const Params& params, std::size_t width, std::size_t height, std::uint64_t seed) {
    MarkGrid grid(width, height);
    KeyedStream stream(seed, KeyedStream::Tag::Game);
    MarkSampler sampler(params);
    for (std::size_t y = 0; y < height; ++y)
        for (std::size_t x = 0; x < width; ++x) grid.at(x, y) = sampler(stream.bits(y, x));
    return grid;
}

LabelGrid backward_induce_labels(const MarkGrid& grid) {
    const std::size_t W = grid.width(), H = grid.height();
    std::vector<std::vector<Symbol>> rows(H + 1, std::vector<Symbol>(W, Symbol::Question));
    for (std::size_t y = H; y-- > 0;) {
        const auto& above = rows[y + 1];
        for (std::size_t x = 0; x < W; ++x) {
            std::size_t c0 = x % 2 == 0 ? x : (x + 1) % W;
            std::size_t c1 = (c0 + 1) % W;
            rows[y][x] = deterministic_site_update(above[c0], above[c1], grid.at(x, y));
        }
    }
    LabelGrid out;
    for (auto& r : rows) out.rows.emplace_back(std::move(r));
    return out;
}

EquivalenceReport check_game_gpca_equivalence(const MarkGrid& grid) {
    auto labels = backward_induce_labels(grid);
    RingConfig c(grid.width(), Symbol::Question);
    EquivalenceReport rep;
    for (std::size_t y = grid.height(); y-- > 0;) {
        c = deterministic_row_update(c, grid.row(y));
        if (!(c == labels.rows[y]) && rep.equal) {
            rep.equal = false;
            rep.first_mismatch_row = y;
        }
    }
    return rep;
}

Estimate mean_with_ci(const std::vector<double>& values) {
    Estimate e;
    e.samples = values.size();
    if (values.empty()) return e;
    double sum = 0;
    for (double v : values) sum += v;
    e.mean = sum / values.size();
    if (values.size() > 1) {
        double ss = 0;
        for (double v : values) ss += (v - e.mean) * (v - e.mean);
        e.ci95 = 1.96 * std::sqrt(ss / (values.size() - 1) / values.size());
    }
    return e;
}

Estimate estimate_draw_probability(const Params& params, std::size_t width, std::size_t height,
                                   std::size_t samples, std::uint64_t seed) {
    if (samples == 0) throw std::invalid_argument("samples must be at least 1");
    std::vector<double> fractions;
    fractions.reserve(samples);
    for (std::size_t s = 0; s < samples; ++s) {
        auto grid = sample_mark_grid(params, width, height, seed + s);
        auto labels = backward_induce_labels(grid);
        fractions.push_back(static_cast<double>(labels.rows[0].count(Symbol::Question)) / width);
    }
    return mean_with_ci(fractions);
}

}  // namespace gpca
