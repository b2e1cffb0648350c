#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "ineqlab/grid.hpp"

namespace ineqlab {

enum class Family { random_fourier, random_steps, stripe, ball_lattice, single_bump, ostwald, branching_stripes };

std::string family_name(Family f);
Family parse_family(const std::string& name);

// Parameters by family (defaults in brackets):
//   random-fourier: modes [8], kmax [4], amplitude [1]
//   random-steps: blocks [6], levels [3]
//   stripe: width [n/2 cells], a [1], b [0]
//   ball-lattice, ostwald: phi, per_axis [1], jitter [0]
//   single-bump: radius [lambda/4], amplitude [1]
//   branching-stripes: levels [3], period [n/2 cells]
struct FamilySpec {
    Family id = Family::random_steps;
    GridSpec grid;
    std::map<std::string, double> params;
    std::uint64_t seed = 0;

    double param(const std::string& key, double fallback) const;
};

GridFunction generate(const FamilySpec& spec);

// Indicator of a union of balls of radius r around lattice points, with the
// lattice jittered per seed. Exposed for the ostwald and ball-lattice families.
GridFunction ball_lattice_indicator(const GridSpec& grid, double phi, int per_axis, double jitter, std::uint64_t seed);

}  // namespace ineqlab
