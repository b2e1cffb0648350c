#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ineqlab/grid.hpp"

namespace ineqlab {

// +1 where u > mu, -1 where u < -mu, 0 otherwise.
struct SignedLevelIndicator {
    GridSpec spec;
    std::vector<int> values;
    double mu = 0.0;
};

SignedLevelIndicator level_indicator(const GridFunction& u, double mu);

enum class KernelKind { smooth_bump, hard_disc };

// Discrete mollifier on scale R, tabulated by displacement (cell 0 is zero
// displacement) and normalized to discrete mass 1. The smooth bump is
// exp(-1/(1-|x/R|^2)); the hard disc is the normalized indicator of the
// cells with |x| < R/2.
struct MollifierKernel {
    KernelKind kind = KernelKind::smooth_bump;
    double radius = 0.0;
    GridFunction weights;
    // ||grad psi||_1 and ||lap psi||_1 of the continuum unit-scale bump
    // (smooth kind only, 0 otherwise).
    double grad_l1_ref = 0.0;
    double lap_l1_ref = 0.0;

    static MollifierKernel smooth_bump(const GridSpec& spec, double R);
    static MollifierKernel hard_disc(const GridSpec& spec, double R);
};

// Continuum ||grad psi||_1 and ||lap psi||_1 of the unit bump in dimension d.
struct BumpConstants {
    double grad_l1 = 0.0;
    double lap_l1 = 0.0;
};
BumpConstants bump_reference_constants(int d);

// The same constants measured on the discrete kernel, rescaled to unit R:
// R * tv_norm(psi_R) and R^2 * ||lap_h psi_R||_1.
BumpConstants measured_kernel_constants(const MollifierKernel& k);

struct Mollified {
    GridFunction value;
    double l1_change = 0.0;  // ||u - u_R||_1
    double slack = 0.0;      // R tv_norm(u) - ||u - u_R||_1
};

Mollified mollify(const GridFunction& u, const MollifierKernel& kernel);

// -lap_h u with the periodic 2d+1 point stencil.
GridFunction neg_laplacian(const GridFunction& u);

struct CoareaReport {
    double tv = 0.0;
    double level_sum = 0.0;  // sum over level gaps of gap * (Per{u > mu} + Per{u < -mu})
    std::size_t levels = 0;
    double rel_error = 0.0;
    bool pass = true;
};

// Anisotropic coarea identity, checked to 1e-12 relative.
CoareaReport coarea_check(const GridFunction& u);

// Cells where chi has density > 1/2 in the discrete ball of radius R/2
// (cells whose centers lie at distance < R/2).
std::vector<bool> density_set(const GridFunction& chi, double R);

struct BallCover {
    GridSpec spec;
    std::vector<std::size_t> centers;  // cell indices
    double radius = 0.0;
    double min_separation = 0.0;  // min pairwise center distance, inf if N < 2
    bool covers = true;           // every set cell lies within distance < R of a center
    std::size_t count() const { return centers.size(); }
};

// Greedy lexicographic packing: accepts a cell when it is at distance >= R
// from every accepted center.
BallCover maximal_packing(const GridSpec& spec, const std::vector<bool>& omega, double R);

enum class PotentialKind { log_capacity, indicator };

struct CoverPotential {
    GridFunction phi;
    double R = 0.0;
    double L = 0.0;
    PotentialKind kind = PotentialKind::indicator;
};

// max_i of ln(L/|x - y_i|)/ln(L/R) clipped to [0, 1]; d = 2, R < L <= lambda/2.
CoverPotential capacity_potential(const BallCover& cover, double R, double L);
// Indicator of the union of closed balls B_R(y_i), any d.
CoverPotential indicator_potential(const BallCover& cover, double R);

// Continuum int of the capacity profile: pi (L^2 - R^2) / (2 ln(L/R)).
double capacity_profile_mass(double R, double L);
// Continuum positive mass of -lap of the capacity profile: 2 pi / ln(L/R).
double capacity_laplacian_mass(double R, double L);

struct ClaimRow {
    std::string id;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    bool pass = true;
};

struct GeomReport {
    std::vector<ClaimRow> claims;
    BallCover cover;
    CoverPotential potential;
    bool pass = true;
};

struct GeomOptions {
    double band = 0.1;  // relative discretization allowance on continuum constants
    double identity_tol = 1e-9;
};

// Claims of the covering construction for binary chi. d = 2 uses the log
// capacity potential with outer radius L; other d use the indicator potential
// and ignore L.
GeomReport verify_geom_claims(const GridFunction& chi, double R, double L, const GeomOptions& opt = {});

std::string cover_csv(const BallCover& cover);
std::string claims_csv(const std::vector<ClaimRow>& rows);

bool is_binary(const GridFunction& u);

}  // namespace ineqlab
