#include "ineqlab/chains.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "ineqlab/error.hpp"
#include "ineqlab/exact_sum.hpp"
#include "ineqlab/families.hpp"
#include "ineqlab/level_geometry.hpp"
#include "ineqlab/norms.hpp"
#include "ineqlab/parallel.hpp"
#include "ineqlab/transport.hpp"

namespace ineqlab {

namespace {

double ratio_of(double lhs, double rhs) {
    if (lhs == 0.0 && rhs == 0.0) return 0.0;
    if (rhs == 0.0) return std::numeric_limits<double>::infinity();
    return lhs / rhs;
}

ChainStep& add(ChainReport& r, const std::string& step, double lhs, double rhs) {
    r.steps.push_back({step, lhs, rhs, ratio_of(lhs, rhs), false, true});
    return r.steps.back();
}

void check_step(ChainReport& r, ChainStep& s, bool ok) {
    s.checked = true;
    s.pass = ok;
    r.pass = r.pass && ok;
}

double hm1_squared(const GridFunction& f) {
    const double x = spectral_norm(f - f.mean(), -1.0, Symbol::lattice);
    return x * x;
}

double half_squared(const GridFunction& f) {
    const double x = spectral_norm(f - f.mean(), -0.5, Symbol::continuous);
    return x * x;
}

// Upwind flux divergence of chi * b along axis a.
GridFunction upwind_divergence(const GridFunction& chi, const GridFunction& b, int a) {
    const GridSpec& s = chi.spec();
    std::vector<double> out(chi.size());
    auto face = [&](std::size_t i, std::size_t ip) {
        return chi[i] * std::max(b[i], 0.0) + chi[ip] * std::min(b[ip], 0.0);
    };
    for (std::size_t i = 0; i < chi.size(); ++i) {
        Index3 c = chi.coords(i);
        Index3 cp = c, cm = c;
        ++cp[a];
        --cm[a];
        const std::size_t ip = chi.index(cp), im = chi.index(cm);
        out[i] = (face(i, ip) - face(im, i)) / s.h();
    }
    return GridFunction(s, std::move(out));
}

}  // namespace

void SlabField::validate() const {
    require(!slices.empty(), "slab needs at least one slice");
    const GridSpec& g = slices.front().spec();
    require(g.d == 2, "slab slices must be two-dimensional");
    for (const auto& s : slices) require(s.spec() == g, "slab slices live on different grids");
    for (const auto* b : {&b1, &b2}) {
        require(b->empty() || b->size() == slices.size(), "slab B' needs one field per slice");
        for (const auto& f : *b) require(f.spec() == g, "slab B' lives on a different grid");
    }
}

ChainReport branching_chain(const SlabField& m) {
    m.validate();
    for (const auto& s : m.slices)
        for (double x : s.values()) require(x >= -1.0 && x <= 1.0, "out-of-range magnetization: |m3| > 1");
    const std::size_t S = m.slices.size();
    const double dz = m.dz();
    const GridSpec& g = m.slices.front().spec();
    const double area = g.volume();

    std::vector<double> tv(S), h2(S), l43(S), prop1(S);
    double mean_defect = 0.0;
    for (std::size_t j = 0; j < S; ++j) mean_defect = std::max(mean_defect, std::abs(m.slices[j].mean()));
    parallel_for(S, [&](std::size_t j) {
        const GridFunction& u = m.slices[j];
        tv[j] = tv_norm(u);
        h2[j] = hm1_squared(u);
        l43[j] = std::pow(lp_norm(u, 4.0 / 3.0), 4.0 / 3.0);
        const double r = std::sqrt(tv[j] * std::sqrt(h2[j]));
        prop1[j] = ratio_of(std::pow(l43[j], 0.75), r);
    });
    // Vertical differences with zero slices outside (-1, 1).
    double stray = 0.0;
    for (std::size_t j = 0; j <= S; ++j) {
        const GridFunction lo = j == 0 ? GridFunction::constant(g, 0.0) : m.slices[j - 1];
        const GridFunction hi = j == S ? GridFunction::constant(g, 0.0) : m.slices[j];
        stray += dz * hm1_squared((hi - lo) * (1.0 / dz));
    }
    double sum_tv = 0.0, sum_h = 0.0, young = 0.0, volume = 0.0;
    for (std::size_t j = 0; j < S; ++j) {
        sum_tv += dz * tv[j];
        sum_h += dz * h2[j];
        young += dz * std::pow(tv[j], 2.0 / 3.0) * std::cbrt(h2[j]);
        volume += dz * l43[j];
    }
    const double E = sum_tv + stray;
    const double A = sum_tv + sum_h;
    const double poincare = 4.0 / (dz * dz) * std::pow(std::sin(std::numbers::pi / (2.0 * (S + 1))), 2);

    ChainReport r;
    r.id = "branching";
    r.terms["slices"] = static_cast<double>(S);
    r.terms["lambda_hat"] = g.lambda;
    r.terms["poincare_constant"] = poincare;
    r.terms["mean_defect"] = mean_defect;
    r.terms["prop1_max_slice_ratio"] = *std::max_element(prop1.begin(), prop1.end());
    r.terms["E_hat"] = E;
    auto& s1 = add(r, "poincare", E, A);
    check_step(r, s1, E >= std::min(1.0, poincare) * A * (1.0 - 1e-12));
    auto& s2 = add(r, "young", A, young);
    check_step(r, s2, A >= young * (1.0 - 1e-12));
    add(r, "prop1", young, volume);
    add(r, "volume", volume, area);
    add(r, "end-to-end", E, area);
    return r;
}

SlabField branching_ansatz(const GridSpec& grid, int slices, int levels, int period) {
    require(grid.d == 2, "branching ansatz needs d = 2");
    require(slices >= 1 && levels >= 1, "branching ansatz needs slices >= 1 and levels >= 1");
    require(period >= 2 && (period >> (levels - 1)) >= 2, "branching ansatz period too small for the levels");
    require(grid.n % period == 0, "branching ansatz period must divide n");
    SlabField m;
    for (int j = 0; j < slices; ++j) {
        const double z = -1.0 + (j + 0.5) * 2.0 / slices;
        const int band = std::min(levels - 1, static_cast<int>(std::abs(z) * levels));
        const int p = period >> band;
        std::vector<double> v(grid.cells());
        GridFunction shape = GridFunction::constant(grid, 0.0);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = (shape.coords(i)[0] % p) < p / 2 ? 1.0 : -1.0;
        m.slices.emplace_back(grid, std::move(v));
    }
    return m;
}

SlabField shift_flow(const GridFunction& top, int slices) {
    require(top.spec().d == 2, "shift flow needs d = 2");
    require(slices >= 2, "shift flow needs at least two slices");
    SlabField f;
    const double speed = top.spec().h() / (2.0 / slices);
    for (int j = 0; j < slices; ++j) {
        GridFunction chi = shift(top, {-(slices - 1 - j), 0, 0});
        f.b1.push_back(chi * (j + 1 < slices ? speed : 0.0));
        f.b2.push_back(GridFunction::constant(top.spec(), 0.0));
        f.slices.push_back(std::move(chi));
    }
    return f;
}

ChainReport superconductor_chain(const SlabField& chi, double phi, double nu) {
    chi.validate();
    require(phi > 0.0 && phi < 1.0, "superconductor chain needs 0 < Phi < 1");
    require(nu > 0.0, "superconductor chain needs nu > 0");
    for (const auto& s : chi.slices) require(is_binary(s), "nonbinary chi where binary declared");
    const std::size_t S = chi.slices.size();
    const double dz = chi.dz();
    const GridSpec& g = chi.slices.front().spec();
    const bool has_b = !chi.b1.empty() || !chi.b2.empty();
    auto b = [&](const std::vector<GridFunction>& c, std::size_t j) {
        return c.empty() ? GridFunction::constant(g, 0.0) : c[j];
    };

    std::vector<double> tv(S), kinetic(S), w2(S);
    const GridFunction& top = chi.slices.back();
    parallel_for(S, [&](std::size_t j) {
        const GridFunction& c = chi.slices[j];
        tv[j] = tv_norm(c);
        const GridFunction bx = b(chi.b1, j), by = b(chi.b2, j);
        ExactSum acc;
        for (std::size_t i = 0; i < c.size(); ++i) acc.add(c[i] * (bx[i] * bx[i] + by[i] * by[i]));
        kinetic[j] = acc.value() * g.cell_volume();
        w2[j] = j + 1 == S ? 0.0 : w2_squared(c, top).value;
    });
    double interface = 0.0, kin = 0.0;
    for (std::size_t j = 0; j < S; ++j) {
        interface += dz * 4.0 / 3.0 * tv[j];
        kin += dz * kinetic[j];
    }
    const double h_top = half_squared(top - phi);
    const double h_bottom = half_squared(chi.slices.front() - phi);
    const double outer = (h_top + h_bottom) / nu;
    const double E = interface + kin + outer;

    ChainReport r;
    r.id = "superconductor";
    r.terms["phi"] = phi;
    r.terms["nu"] = nu;
    r.terms["interface"] = interface;
    r.terms["kinetic"] = kin;
    r.terms["outer"] = outer;
    r.terms["E"] = E;

    double max_residual = 0.0;
    for (std::size_t j = 0; j + 1 < S; ++j) {
        GridFunction res = (chi.slices[j + 1] - chi.slices[j]) * (1.0 / dz);
        if (has_b) {
            res = res + upwind_divergence(chi.slices[j], b(chi.b1, j), 0) +
                  upwind_divergence(chi.slices[j], b(chi.b2, j), 1);
        }
        const double l1 = lp_norm(res, 1.0);
        max_residual = std::max(max_residual, l1);
        add(r, "continuity@" + std::to_string(j), l1, 0.0);
    }
    r.terms["max_continuity_residual"] = max_residual;
    const bool bb_claimed = max_residual <= kContinuityTol;
    r.terms["bb_claimed"] = bb_claimed ? 1.0 : 0.0;

    // W2^2(chi_j, chi_top) <= (z_top - z_j) * sum_{k >= j} dz int chi_k |B'_k|^2
    double tail = 0.0;
    std::vector<double> rhs3(S);
    for (std::size_t jj = S; jj-- > 0;) {
        if (jj + 1 < S) tail += dz * kinetic[jj];
        const double span = (S - 1 - jj) * dz;
        if (jj + 1 < S) {
            auto& s = add(r, "bb@" + std::to_string(jj), w2[jj], span * tail);
            if (bb_claimed) check_step(r, s, w2[jj] <= span * tail * (1.0 + 1e-9) + 1e-14);
        }
        rhs3[jj] = tv[jj] + w2[jj] + h_top / nu;
    }
    std::size_t zbest = 0;
    for (std::size_t j = 1; j < S; ++j)
        if (rhs3[j] < rhs3[zbest]) zbest = j;
    r.terms["regime3_slice_z"] = chi.z(zbest);
    auto& s = add(r, "regime3", E, rhs3[zbest]);
    check_step(r, s, E >= kRegime3Constant * rhs3[zbest] * (1.0 - 1e-12));
    return r;
}

ChainReport regime2_chain(const GridFunction& chi) {
    require(chi.spec().d == 2, "regime-2 chain needs d = 2");
    require(is_binary(chi), "nonbinary chi where binary declared");
    const double phi = chi.mean();
    require(phi > 0.0 && phi < 0.5, "regime-2 chain needs 0 < Phi < 1/2");
    const GridSpec& g = chi.spec();
    const double tv = tv_norm(chi);
    const double w = w2_squared(chi, GridFunction::constant(g, phi)).value;
    const double young = std::pow(tv, 2.0 / 3.0) * std::cbrt(w);
    const GridFunction u = chi * (1.0 / phi);
    const double inter = std::pow(tv / phi, 2.0 / 3.0) * std::cbrt(w / phi);
    double tail = 0.0;
    for (double x : u.values())
        if (x > 2.0) tail += std::pow(x - 2.0, 4.0 / 3.0);
    tail *= g.cell_volume();
    const double target = g.volume() * std::pow(phi, 2.0 / 3.0);

    ChainReport r;
    r.id = "regime2";
    r.terms["phi"] = phi;
    r.terms["tv"] = tv;
    r.terms["w2"] = w;
    auto& s = add(r, "en-young", tv + w, young);
    check_step(r, s, tv + w >= young * (1.0 - 1e-12));
    auto& t = add(r, "int-rescale", phi * inter, young);
    check_step(r, t, std::abs(phi * inter - young) <= 1e-12 * std::max(young, 1e-300));
    add(r, "int-prop3", inter, tail);
    add(r, "int-volume", tail, g.volume() * std::pow(phi, -1.0 / 3.0));
    add(r, "assembled", tv + w, target);
    return r;
}

std::vector<SlabField> frozen_branching_set() {
    std::vector<SlabField> out;
    for (double lambda : {1.0, 4.0})
        for (int n : {32, 64})
            for (int S : {8, 16})
                for (int levels : {1, 2, 3}) out.push_back(branching_ansatz({2, n, lambda}, S, levels, n / 2));
    return out;
}

std::vector<GridFunction> frozen_regime2_set() {
    std::vector<GridFunction> out;
    for (double lambda : {1.0, 4.0})
        for (double phi : {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64})
            for (int per_axis : {1, 2, 4}) out.push_back(ball_lattice_indicator({2, 32, lambda}, phi, per_axis, 0.25, 0));
    return out;
}

double calibrate_branching_step() {
    const auto set = frozen_branching_set();
    std::vector<double> mins(set.size());
    parallel_for(set.size(), [&](std::size_t i) {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& s : branching_chain(set[i]).steps) m = std::min(m, s.ratio);
        mins[i] = m;
    });
    return *std::min_element(mins.begin(), mins.end());
}

double calibrate_regime2() {
    const auto set = frozen_regime2_set();
    std::vector<double> ratios(set.size());
    parallel_for(set.size(), [&](std::size_t i) { ratios[i] = regime2_chain(set[i]).steps.back().ratio; });
    return *std::min_element(ratios.begin(), ratios.end());
}

std::string chain_csv(const ChainReport& r) {
    std::string out = "step,value_lhs,value_rhs,ratio\n";
    char buf[256];
    for (const auto& s : r.steps) {
        std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g\n", s.step.c_str(), s.lhs, s.rhs, s.ratio);
        out += buf;
    }
    return out;
}

}  // namespace ineqlab
