#include "gpca/lattice.hpp"

#include <ostream>
#include <stdexcept>

namespace gpca {

DensityTriple DensityTriple::of(const RingConfig& c) {
    return {c.count(Symbol::Zero), c.count(Symbol::Question), c.count(Symbol::One), c.size()};
}

Rational DensityTriple::fraction(Symbol s) const {
    std::size_t n = s == Symbol::Zero ? zeros : s == Symbol::Question ? questions : ones;
    return Rational(n, length);
}

Trajectory run_trajectory(const RingConfig& initial, const Params& params, std::size_t steps,
                          std::uint64_t seed) {
    KeyedStream stream(seed);
    MarkSampler sampler(params);
    Trajectory tr{params, seed, {initial}, {DensityTriple::of(initial)}};
    tr.configs.reserve(steps + 1);
    for (std::size_t t = 0; t < steps; ++t) {
        auto marks = sample_mark_row(sampler, stream, t, initial.size());
        tr.configs.push_back(deterministic_row_update(tr.configs.back(), marks));
        tr.densities.push_back(DensityTriple::of(tr.configs.back()));
    }
    return tr;
}

std::pair<Trajectory, Trajectory> coupled_trajectory(const RingConfig& a, const RingConfig& b,
                                                     const Params& params, std::size_t steps,
                                                     std::uint64_t seed) {
    if (a.size() != b.size()) throw std::invalid_argument("coupled runs need equal ring lengths");
    return {run_trajectory(a, params, steps, seed), run_trajectory(b, params, steps, seed)};
}

std::vector<Rational> question_density_profile(const Params& params, std::size_t length,
                                               std::size_t steps, std::uint64_t seed) {
    KeyedStream stream(seed);
    MarkSampler sampler(params);
    std::vector<std::vector<SiteMark>> layers;
    std::vector<Rational> out{Rational(1)};
    for (std::size_t t = 1; t <= steps; ++t) {
        layers.push_back(sample_mark_row(sampler, stream, t - 1, length));
        RingConfig c(length, Symbol::Question);
        for (std::size_t s = t; s-- > 0;) c = deterministic_row_update(c, layers[s]);
        out.push_back(Rational(c.count(Symbol::Question), length));
    }
    return out;
}

namespace {

void header(std::ostream& out, const Provenance& prov, const char* lead) {
    out << lead << " gpca-lab " << GPCA_VERSION << "\n";
    out << lead << " command: " << prov.command << "\n";
    out << lead << " seed: " << prov.seed << "\n";
    out << lead << " p: " << prov.params.p() << " q: " << prov.params.q() << "\n";
}

}  // namespace

void write_density_csv(std::ostream& out, const Trajectory& tr, const Provenance& prov) {
    header(out, prov, "#");
    out << "t,density0,densityQ,density1\n";
    for (std::size_t t = 0; t < tr.densities.size(); ++t) {
        const auto& d = tr.densities[t];
        out << t << ',' << to_decimal(d.fraction(Symbol::Zero), 9) << ','
            << to_decimal(d.fraction(Symbol::Question), 9) << ','
            << to_decimal(d.fraction(Symbol::One), 9) << '\n';
    }
}

int gray_level(Symbol s) { return static_cast<int>(s); }

void write_raster_pgm(std::ostream& out, const std::vector<RingConfig>& rows, const Provenance& prov) {
    out << "P2\n";
    header(out, prov, "#");
    out << (rows.empty() ? 0 : rows.front().size()) << ' ' << rows.size() << "\n2\n";
    for (const auto& row : rows) {
        for (std::size_t x = 0; x < row.size(); ++x) out << (x ? " " : "") << gray_level(row[x]);
        out << '\n';
    }
}

}  // namespace gpca
