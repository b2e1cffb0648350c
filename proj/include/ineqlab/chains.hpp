#pragma once

#include <map>
#include <string>
#include <vector>

#include "ineqlab/grid.hpp"

namespace ineqlab {

// Horizontal slices at the centers z_j = -1 + (j + 1/2) dz, dz = 2/S, ordered
// bottom to top. b1, b2 hold the horizontal field B' per slice (empty means
// zero); B'_j carries slice j to slice j + 1.
struct SlabField {
    std::vector<GridFunction> slices;
    std::vector<GridFunction> b1;
    std::vector<GridFunction> b2;

    double dz() const { return 2.0 / static_cast<double>(slices.size()); }
    double z(std::size_t j) const { return -1.0 + (static_cast<double>(j) + 0.5) * dz(); }
    void validate() const;
};

struct ChainStep {
    std::string step;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;  // lhs / rhs, 0 when both vanish
    bool checked = false;
    bool pass = true;
};

struct ChainReport {
    std::string id;
    std::vector<ChainStep> steps;
    std::map<std::string, double> terms;
    bool pass = true;
};

// Chain lines: E_hat, slice TV + slice Hdot^-1, Young, per-slice Prop 1,
// volume. Ratios of consecutive lines are reported as steps poincare, young,
// prop1, volume, plus end-to-end E_hat / Lambda_hat^2. m is zero outside
// (-1, 1); the discrete Poincare constant is recorded.
ChainReport branching_chain(const SlabField& m);

// m3 = +-1 stripes along x1 whose period halves per level towards the
// surfaces: slice j uses period >> level(j) cells with level(j) the band of
// |z_j| among `levels` equal bands.
SlabField branching_ansatz(const GridSpec& grid, int slices, int levels, int period);

// Energy with the outer field at its minimum given the surface traces,
// continuity residuals, Benamou-Brenier slice comparisons and the regime-3
// assembly. Direction checks: BB rows when the continuity residual vanishes,
// and E >= (8/27) min_z [tv(chi_z) + W2^2(chi_z, chi_top) + H / nu].
ChainReport superconductor_chain(const SlabField& chi, double phi, double nu);

constexpr double kRegime3Constant = 8.0 / 27.0;
constexpr double kContinuityTol = 1e-9;

// chi_j = shift(top, S - 1 - j cells along x1) with B'_1 = h/dz on chi_j
// below the top slice.
SlabField shift_flow(const GridFunction& top, int slices);

// Regime-2 lines on one binary slice chi with volume fraction phi: tv + W2^2
// vs Young product, the prop3 form on u = chi/phi with threshold 2, and the
// assembled tv + W2^2 vs Lambda^2 phi^{2/3}.
ChainReport regime2_chain(const GridFunction& chi);

// Frozen-set minima used as fixture constants.
double calibrate_branching_step();
double calibrate_regime2();
std::vector<SlabField> frozen_branching_set();
std::vector<GridFunction> frozen_regime2_set();

std::string chain_csv(const ChainReport& r);

}  // namespace ineqlab
