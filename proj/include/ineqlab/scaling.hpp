#pragma once

#include <string>
#include <vector>

#include "ineqlab/grid.hpp"
#include "ineqlab/inequalities.hpp"

namespace ineqlab {

// Functional ids: "lp:<p>", "tv", "spectral:<s>", "w2", "weak:<p>"; p and s
// accept fractions such as 4/3.
struct ScalingReport {
    std::string functional;
    double ell = 1.0;
    double M = 1.0;
    int k = 1;
    double a = 0.0;  // predicted factor ell^a M^b
    double b = 0.0;
    double predicted = 1.0;
    double measured = 1.0;
    double deviation = 0.0;  // relative
    double tol = 0.0;
    bool pass = true;
};

constexpr double kQuadratureTol = 1e-12;  // rounding of pow and of the sums
constexpr double kSpectralTol = 1e-9;
constexpr double kExactW2Tol = 1e-8;
constexpr double kTiledW2Tol = 1e-2;

double parse_number(const std::string& s);  // "4/3", "-1", "inf"

// Evaluates the functional on u and on dilate(u, ell, M) (v likewise for w2).
// Predicted exponents: lp(p), weak(p): (d/p, 1); tv: (d-1, 1);
// spectral(s): (d/2 - s, 1); w2: (d+2, 1).
ScalingReport homogeneity_check(const std::string& functional, const GridFunction& u, double ell, double M,
                                const GridFunction* v = nullptr);

// Per-volume value of every functional in the inequality on u and tile(u, k).
// The rows use predicted = 1 and measured = per-volume ratio.
std::vector<ScalingReport> extensivity_check(IneqId id, const GridFunction& u, int k);

struct CoarseningReport {
    double mean = 0.0;
    double product = 0.0;      // ||grad u||_1 || |grad|^{-1} u ||_2
    double l43_squared = 0.0;  // ||u||_{4/3}^2
    double ratio = 0.0;        // product / l43_squared
    double constant = 0.0;
    bool pass = true;          // ratio >= constant (1 - rounding)
};

// u must take values in {-1, 1} with mean zero.
CoarseningReport coarsening_bound(const GridFunction& u, double constant);

struct ExponentRow {
    std::string name;
    std::string value;     // exact rational
    std::string expected;
    bool pass = true;
};

// Exact rational bookkeeping of the scaling arguments.
std::vector<ExponentRow> regime_exponents();

std::string scaling_csv(const std::vector<ScalingReport>& rows);
std::string exponents_csv(const std::vector<ExponentRow>& rows);

}  // namespace ineqlab
