#include "ineqlab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "ineqlab/error.hpp"
#include "ineqlab/exact_sum.hpp"

namespace ineqlab {
namespace {

// Distinct |u| > 0 values with the number of cells at or above each.
std::vector<std::pair<double, double>> upper_counts(const GridFunction& u) {
    std::map<double, double> hist;
    for (double x : u.values()) {
        double a = std::abs(x);
        if (a > 0.0) hist[a] += 1.0;
    }
    std::vector<std::pair<double, double>> out;
    double above = 0.0;
    for (auto it = hist.rbegin(); it != hist.rend(); ++it) {
        above += it->second;
        out.emplace_back(it->first, above);
    }
    return out;
}

}  // namespace

TvMode parse_tv_mode(const std::string& s) {
    if (s == "anisotropic") return TvMode::anisotropic;
    if (s == "isotropic") return TvMode::isotropic;
    throw PreconditionError("unknown TV mode '" + s + "'");
}

bool has_zero_mean(const GridFunction& u) { return std::abs(u.mean()) <= 1e-10 * u.max_abs(); }

double lp_norm(const GridFunction& u, double p) {
    require(p >= 1.0, "lp_norm needs p >= 1");
    if (std::isinf(p)) return u.max_abs();
    ExactSum s;
    for (double x : u.values()) s.add(std::pow(std::abs(x), p));
    return std::pow(s.value() * u.spec().cell_volume(), 1.0 / p);
}

WeakNorm weak_lp_norm(const GridFunction& u, double p) {
    require(p >= 1.0 && std::isfinite(p), "weak_lp_norm needs 1 <= p < inf");
    // count * a^p is one rounding of the exact sum of count copies of a^p, so
    // each candidate is bounded by the strong sum without any tolerance.
    WeakNorm best;
    const double hd = u.spec().cell_volume();
    double best_mass = -1.0;
    for (auto [a, count] : upper_counts(u)) {
        double mass = count * std::pow(a, p);
        if (mass > best_mass) {
            best_mass = mass;
            best.level = a;
        }
    }
    if (best_mass > 0.0) best.value = std::pow(best_mass * hd, 1.0 / p);
    return best;
}

WeakNorm weak_log_norm(const GridFunction& u) {
    WeakNorm best;
    const double hd = u.spec().cell_volume();
    for (auto [a, count] : upper_counts(u)) {
        if (a <= std::numbers::e) continue;
        double v = a * std::pow(std::log(a), 0.25) * std::pow(count * hd, 0.75);
        if (v > best.value) {
            best.value = v;
            best.level = a;
        }
    }
    return best;
}

double log_weighted_l43(const GridFunction& u) {
    GridFunction w = u.map([](double x) { return x * std::pow(std::log(std::max(x, std::numbers::e)), 0.25); });
    return lp_norm(w, 4.0 / 3.0);
}

double tv_norm(const GridFunction& u, TvMode mode) {
    const GridSpec& s = u.spec();
    ExactSum acc;
    for (std::size_t i = 0; i < u.size(); ++i) {
        Index3 c = u.coords(i);
        double sq = 0.0;
        for (int a = 0; a < s.d; ++a) {
            Index3 e = c;
            e[a] += 1;
            double diff = u[u.index(e)] - u[i];
            if (mode == TvMode::anisotropic)
                acc.add(std::abs(diff));
            else
                sq += diff * diff;
        }
        if (mode == TvMode::isotropic) acc.add(std::sqrt(sq));
    }
    return acc.value() * std::pow(s.h(), s.d - 1);
}

double grad_q_norm(const GridFunction& u, double q) {
    require(q >= 1.0, "gradient norm needs q >= 1");
    const GridSpec& s = u.spec();
    const double inv_h = 1.0 / s.h();
    if (q == 1.0) return tv_norm(u, TvMode::anisotropic);
    double mx = 0.0;
    ExactSum acc;
    for (std::size_t i = 0; i < u.size(); ++i) {
        Index3 c = u.coords(i);
        for (int a = 0; a < s.d; ++a) {
            Index3 e = c;
            e[a] += 1;
            double g = std::abs(u[u.index(e)] - u[i]) * inv_h;
            if (std::isinf(q))
                mx = std::max(mx, g);
            else
                acc.add(std::pow(g, q));
        }
    }
    if (std::isinf(q)) return mx;
    return std::pow(acc.value() * s.cell_volume(), 1.0 / q);
}

double spectral_norm(const GridFunction& u, double s, Symbol sym) {
    require(s >= -1.0 && s <= 1.0, "spectral order must lie in [-1, 1]");
    if (s < 0.0) require(has_zero_mean(u), "negative-order norm needs mean zero");
    return std::sqrt(multiplier_energy(u, s, sym));
}

double doubleint_half_norm(const GridFunction& f, double cutoff) {
    const GridSpec& s = f.spec();
    require(cutoff > 0.0 && cutoff <= s.lambda / 2 * (1 + 1e-12), "cutoff must lie in (0, lambda/2]");
    const double h = s.h();
    GridFunction shape = GridFunction::constant(s, 0.0);
    ExactSum acc;
    for (std::size_t j = 1; j < f.size(); ++j) {
        Index3 delta = shape.coords(j);
        double dist = std::sqrt(torus_cell_dist2(delta, {0, 0, 0}, s.d, s.n)) * h;
        if (dist > cutoff * (1 + 1e-12)) continue;
        const double w = 1.0 / std::pow(dist, s.d - 1);
        ExactSum row;
        for (std::size_t i = 0; i < f.size(); ++i) {
            Index3 c = f.coords(i);
            for (int a = 0; a < s.d; ++a) c[a] += delta[a];
            double diff = f[f.index(c)] - f[i];
            row.add(diff * diff);
        }
        acc.add(w * row.value());
    }
    return acc.value() * std::pow(h, 2 * s.d);
}

double gn_rhs(const GridFunction& u, double q) {
    require(q >= 1.0, "gn_rhs needs q >= 1");
    require(has_zero_mean(u), "gn_rhs needs mean zero");
    return std::sqrt(grad_q_norm(u, q)) * std::sqrt(spectral_norm(u, -1.0, Symbol::lattice));
}

}  // namespace ineqlab
