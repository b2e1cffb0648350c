#pragma once

#include <string>

#include "ineqlab/grid.hpp"
#include "ineqlab/spectrum.hpp"

namespace ineqlab {

enum class TvMode { anisotropic, isotropic };

TvMode parse_tv_mode(const std::string& s);

struct WeakNorm {
    double value = 0.0;
    double level = 0.0;  // level attaining the supremum, 0 if none
};

// (h^d sum |u|^p)^{1/p}; p = inf gives max |u|.
double lp_norm(const GridFunction& u, double p);

// sup_mu mu |{|u| >= mu}|^{1/p}, attained at a value of |u|.
WeakNorm weak_lp_norm(const GridFunction& u, double p);

// sup_{mu >= e} mu ln^{1/4}(mu) |{|u| > mu}|^{3/4}; the sup over a gap between
// levels is approached just below the next level.
WeakNorm weak_log_norm(const GridFunction& u);

// || u ln^{1/4} max(u, e) ||_{4/3}
double log_weighted_l43(const GridFunction& u);

double tv_norm(const GridFunction& u, TvMode mode = TvMode::anisotropic);

// (h^d sum_x sum_a |D_a u|^q)^{1/q} with D_a the forward difference quotient.
// q = 1 is the anisotropic total variation.
double grad_q_norm(const GridFunction& u, double q);

// || |grad|^s u ||_2 with the k = 0 mode dropped. s < 0 requires mean zero
// within 1e-10 max|u|.
double spectral_norm(const GridFunction& u, double s, Symbol sym = Symbol::continuous);

// h^{2d} sum over pairs with 0 < dist <= cutoff of |f(x) - f(y)|^2 / dist^{d-1},
// each displacement class counted once.
double doubleint_half_norm(const GridFunction& f, double cutoff);

// ||grad u||_q^{1/2} || |grad|^{-1} u ||_2^{1/2}, lattice symbol so that the
// q = 2 case is bounded below by ||u||_2 exactly.
double gn_rhs(const GridFunction& u, double q);

bool has_zero_mean(const GridFunction& u);

}  // namespace ineqlab
