#pragma once

#include "gpca/rules.hpp"

#include <iosfwd>
#include <utility>
#include <vector>

namespace gpca {

struct DensityTriple {
    std::size_t zeros = 0, questions = 0, ones = 0, length = 0;

    static DensityTriple of(const RingConfig& c);
    Rational fraction(Symbol s) const;
};

struct Trajectory {
    Params params;
    std::uint64_t seed;
    std::vector<RingConfig> configs;
    std::vector<DensityTriple> densities;
};

Trajectory run_trajectory(const RingConfig& initial, const Params& params, std::size_t steps,
                          std::uint64_t seed);

std::pair<Trajectory, Trajectory> coupled_trajectory(const RingConfig& a, const RingConfig& b,
                                                     const Params& params, std::size_t steps,
                                                     std::uint64_t seed);

// Layer t of the profile is E_{w_0} o ... o E_{w_{t-1}} applied to all-?, with fixed
// layers w_s = marks of the keyed stream at time s. Its law at each t is that of the
// forward iterate, and per seed it is nonincreasing in t.
std::vector<Rational> question_density_profile(const Params& params, std::size_t length,
                                               std::size_t steps, std::uint64_t seed);

struct Provenance {
    std::string command;
    std::uint64_t seed = 0;
    Params params;
};

void write_density_csv(std::ostream& out, const Trajectory& tr, const Provenance& prov);
void write_raster_pgm(std::ostream& out, const std::vector<RingConfig>& rows, const Provenance& prov);

int gray_level(Symbol s);

}  // namespace gpca
