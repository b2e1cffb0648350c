#include "ineqlab/level_geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "ineqlab/error.hpp"
#include "ineqlab/exact_sum.hpp"
#include "ineqlab/norms.hpp"
#include "ineqlab/spectrum.hpp"

namespace ineqlab {
namespace {

constexpr double kPi = std::numbers::pi;

struct Offset {
    Index3 j;
    long r2;  // squared length in cells
};

// Distinct periodic displacements (each axis in (-n/2, n/2]) of squared cell
// length below (or up to, when closed) (r/h)^2.
std::vector<Offset> ball_offsets(const GridSpec& s, double r, bool closed) {
    const double q = r / s.h();
    const double q2 = q * q;
    const int lo = -((s.n - 1) / 2), hi = s.n / 2;
    const int reach = std::min(hi, static_cast<int>(std::ceil(q)));
    const int lo_a = std::max(lo, -reach);
    std::vector<Offset> out;
    Index3 j{0, 0, 0};
    auto inside = [&](long r2) { return closed ? r2 <= q2 : r2 < q2; };
    for (j[0] = lo_a; j[0] <= reach; ++j[0])
        for (j[1] = s.d > 1 ? lo_a : 0; j[1] <= (s.d > 1 ? reach : 0); ++j[1])
            for (j[2] = s.d > 2 ? lo_a : 0; j[2] <= (s.d > 2 ? reach : 0); ++j[2]) {
                long r2 = static_cast<long>(j[0]) * j[0] + static_cast<long>(j[1]) * j[1] +
                          static_cast<long>(j[2]) * j[2];
                if (inside(r2)) out.push_back({j, r2});
            }
    return out;
}

std::size_t displaced(const GridFunction& shape, std::size_t i, const Index3& j) {
    Index3 c = shape.coords(i);
    for (int a = 0; a < 3; ++a) c[a] += j[a];
    return shape.index(c);
}

GridFunction offsets_to_kernel(const GridSpec& s, const std::vector<Offset>& offs, const std::vector<double>& w) {
    GridFunction shape = GridFunction::constant(s, 0.0);
    std::vector<double> v(s.cells(), 0.0);
    for (std::size_t t = 0; t < offs.size(); ++t) v[shape.index(offs[t].j)] = w[t];
    return make(s, std::move(v));
}

double ball_volume(int d, double r) { return std::pow(kPi, d / 2.0) / std::tgamma(d / 2.0 + 1.0) * std::pow(r, d); }

double ratio_of(double lhs, double rhs) {
    if (rhs > 0.0) return lhs / rhs;
    return lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

ClaimRow row(const std::string& id, double lhs, double rhs, double allowance) {
    ClaimRow r{id, lhs, rhs, ratio_of(lhs, rhs), true};
    r.pass = lhs <= rhs * (1.0 + allowance);
    return r;
}

}  // namespace

bool is_binary(const GridFunction& u) {
    return std::all_of(u.values().begin(), u.values().end(), [](double x) { return x == 0.0 || x == 1.0; });
}

SignedLevelIndicator level_indicator(const GridFunction& u, double mu) {
    require(mu >= 0.0, "level must be nonnegative");
    SignedLevelIndicator s{u.spec(), std::vector<int>(u.size(), 0), mu};
    for (std::size_t i = 0; i < u.size(); ++i) s.values[i] = u[i] > mu ? 1 : (u[i] < -mu ? -1 : 0);
    return s;
}

MollifierKernel MollifierKernel::smooth_bump(const GridSpec& spec, double R) {
    spec.validate();
    require(R > 0.0 && R <= spec.lambda / 2.0, "smooth kernel radius must lie in (0, lambda/2]");
    auto offs = ball_offsets(spec, R, false);
    const double q2 = (R / spec.h()) * (R / spec.h());
    std::vector<double> w;
    for (const auto& o : offs) w.push_back(std::exp(-1.0 / (1.0 - o.r2 / q2)));
    const double total = exact_sum(w);
    for (double& x : w) x /= total;
    MollifierKernel k;
    k.kind = KernelKind::smooth_bump;
    k.radius = R;
    k.weights = offsets_to_kernel(spec, offs, w);
    auto ref = bump_reference_constants(spec.d);
    k.grad_l1_ref = ref.grad_l1;
    k.lap_l1_ref = ref.lap_l1;
    return k;
}

MollifierKernel MollifierKernel::hard_disc(const GridSpec& spec, double R) {
    spec.validate();
    require(R > 0.0 && R <= spec.lambda, "hard-disc radius R/2 must lie in (0, lambda/2]");
    auto offs = ball_offsets(spec, R / 2.0, false);
    if (offs.empty()) offs.push_back({{0, 0, 0}, 0});
    std::vector<double> w(offs.size(), 1.0 / offs.size());
    MollifierKernel k;
    k.kind = KernelKind::hard_disc;
    k.radius = R;
    k.weights = offsets_to_kernel(spec, offs, w);
    return k;
}

namespace {

BumpConstants compute_bump_constants(int d) {
    const double omega = 2.0 * std::pow(kPi, d / 2.0) / std::tgamma(d / 2.0);
    const int steps = 1 << 20;
    ExactSum mass, grad, lap;
    for (int i = 0; i < steps; ++i) {
        double r = (i + 0.5) / steps;
        double s = 1.0 - r * r;
        double f = std::exp(-1.0 / s);
        double fr = f * (-2.0 / (s * s));  // f'(r) / r
        double f2 = f * (4.0 * r * r / (s * s * s * s) - (2.0 + 6.0 * r * r) / (s * s * s));
        double w = std::pow(r, d - 1) / steps;
        mass.add(f * w);
        grad.add(std::abs(fr * r) * w);
        lap.add(std::abs(f2 + (d - 1) * fr) * w);
    }
    const double z = omega * mass.value();
    return {omega * grad.value() / z, omega * lap.value() / z};
}

}  // namespace

BumpConstants bump_reference_constants(int d) {
    require(d >= 1 && d <= 3, "dimension must be 1, 2 or 3");
    static const std::array<BumpConstants, 3> table{compute_bump_constants(1), compute_bump_constants(2),
                                                    compute_bump_constants(3)};
    return table[d - 1];
}

BumpConstants measured_kernel_constants(const MollifierKernel& k) {
    const GridSpec& s = k.weights.spec();
    GridFunction density = k.weights * (1.0 / s.cell_volume());
    GridFunction lap = neg_laplacian(density);
    ExactSum l1;
    for (double x : lap.values()) l1.add(std::abs(x));
    return {k.radius * tv_norm(density), k.radius * k.radius * l1.value() * s.cell_volume()};
}

Mollified mollify(const GridFunction& u, const MollifierKernel& kernel) {
    require(u.spec() == kernel.weights.spec(), "kernel and function live on different grids");
    Mollified m;
    m.value = convolve(u, kernel.weights);
    ExactSum diff;
    for (std::size_t i = 0; i < u.size(); ++i) diff.add(std::abs(u[i] - m.value[i]));
    m.l1_change = diff.value() * u.spec().cell_volume();
    m.slack = kernel.radius * tv_norm(u) - m.l1_change;
    return m;
}

GridFunction neg_laplacian(const GridFunction& u) {
    const GridSpec& s = u.spec();
    const double inv = 1.0 / (s.h() * s.h());
    std::vector<double> out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        Index3 c = u.coords(i);
        double acc = 0.0;
        for (int a = 0; a < s.d; ++a) {
            Index3 p = c, q = c;
            ++p[a];
            --q[a];
            acc += 2.0 * u[i] - u[u.index(p)] - u[u.index(q)];
        }
        out[i] = acc * inv;
    }
    return make(s, std::move(out));
}

CoareaReport coarea_check(const GridFunction& u) {
    const GridSpec& s = u.spec();
    std::vector<double> lv{0.0};
    for (double x : u.values()) lv.push_back(std::abs(x));
    std::sort(lv.begin(), lv.end());
    lv.erase(std::unique(lv.begin(), lv.end()), lv.end());
    auto at = [&](double x) { return std::lower_bound(lv.begin(), lv.end(), x) - lv.begin(); };

    // each face lies on the boundary of {u > mu} for mu in [max(lo,0), max(hi,0))
    // and of {u < -mu} for mu in [max(-hi,0), max(-lo,0))
    std::vector<long> diff(lv.size() + 1, 0);
    for (std::size_t i = 0; i < u.size(); ++i) {
        Index3 c = u.coords(i);
        for (int a = 0; a < s.d; ++a) {
            Index3 e = c;
            ++e[a];
            double p = u[i], q = u[u.index(e)];
            double lo = std::min(p, q), hi = std::max(p, q);
            if (lo == hi) continue;
            ++diff[at(std::max(lo, 0.0))];
            --diff[at(std::max(hi, 0.0))];
            ++diff[at(std::max(-hi, 0.0))];
            --diff[at(std::max(-lo, 0.0))];
        }
    }
    // descending sweep over level gaps
    std::vector<long> count(lv.size(), 0);
    long run = 0;
    for (std::size_t j = 0; j < lv.size(); ++j) count[j] = (run += diff[j]);
    ExactSum total;
    for (std::size_t j = lv.size() - 1; j-- > 0;) total.add((lv[j + 1] - lv[j]) * static_cast<double>(count[j]));

    CoareaReport r;
    r.levels = lv.size() - 1;
    r.level_sum = total.value() * std::pow(s.h(), s.d - 1);
    r.tv = tv_norm(u, TvMode::anisotropic);
    const double scale = std::max(std::abs(r.tv), std::abs(r.level_sum));
    r.rel_error = scale > 0.0 ? std::abs(r.tv - r.level_sum) / scale : 0.0;
    r.pass = r.rel_error <= 1e-12;
    return r;
}

std::vector<bool> density_set(const GridFunction& chi, double R) {
    const GridSpec& s = chi.spec();
    require(is_binary(chi), "density_set needs a binary function");
    require(R >= 2.0 * s.h(), "R < 2h: the ball of radius R/2 contains no neighbor cells");
    require(R <= s.lambda, "R/2 exceeds lambda/2");
    auto offs = ball_offsets(s, R / 2.0, false);
    std::vector<double> ones(offs.size(), 1.0);
    GridFunction counts = convolve(chi, offsets_to_kernel(s, offs, ones));
    std::vector<bool> omega(chi.size());
    const long ball = static_cast<long>(offs.size());
    for (std::size_t i = 0; i < chi.size(); ++i) omega[i] = 2 * std::lround(counts[i]) > ball;
    return omega;
}

BallCover maximal_packing(const GridSpec& spec, const std::vector<bool>& omega, double R) {
    spec.validate();
    require(omega.size() == spec.cells(), "set does not match the grid");
    require(R > 0.0, "radius must be positive");
    GridFunction shape = GridFunction::constant(spec, 0.0);
    auto offs = ball_offsets(spec, R, false);
    std::vector<bool> blocked(spec.cells(), false);
    BallCover c;
    c.spec = spec;
    c.radius = R;
    for (std::size_t i = 0; i < spec.cells(); ++i) {
        if (!omega[i] || blocked[i]) continue;
        c.centers.push_back(i);
        for (const auto& o : offs) blocked[displaced(shape, i, o.j)] = true;
    }
    for (std::size_t i = 0; i < spec.cells(); ++i) c.covers = c.covers && (!omega[i] || blocked[i]);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < c.centers.size(); ++a)
        for (std::size_t b = a + 1; b < c.centers.size(); ++b)
            best = std::min(best, torus_cell_dist2(shape.coords(c.centers[a]), shape.coords(c.centers[b]), spec.d,
                                                   spec.n));
    c.min_separation = std::isinf(best) ? best : std::sqrt(best) * spec.h();
    return c;
}

CoverPotential capacity_potential(const BallCover& cover, double R, double L) {
    const GridSpec& s = cover.spec;
    require(s.d == 2, "capacity potential needs d = 2");
    require(R > 0.0 && L > R, "capacity potential needs L > R > 0");
    require(L <= s.lambda / 2.0, "capacity potential needs L <= lambda/2");
    auto offs = ball_offsets(s, L, false);
    std::vector<double> prof(offs.size());
    const double denom = std::log(L / R);
    for (std::size_t t = 0; t < offs.size(); ++t) {
        double r = std::sqrt(static_cast<double>(offs[t].r2)) * s.h();
        prof[t] = r <= R ? 1.0 : std::clamp(std::log(L / r) / denom, 0.0, 1.0);
    }
    GridFunction shape = GridFunction::constant(s, 0.0);
    std::vector<double> v(s.cells(), 0.0);
    for (auto y : cover.centers)
        for (std::size_t t = 0; t < offs.size(); ++t) {
            double& x = v[displaced(shape, y, offs[t].j)];
            x = std::max(x, prof[t]);
        }
    return {make(s, std::move(v)), R, L, PotentialKind::log_capacity};
}

CoverPotential indicator_potential(const BallCover& cover, double R) {
    const GridSpec& s = cover.spec;
    require(R > 0.0, "radius must be positive");
    auto offs = ball_offsets(s, R, true);
    GridFunction shape = GridFunction::constant(s, 0.0);
    std::vector<double> v(s.cells(), 0.0);
    for (auto y : cover.centers)
        for (const auto& o : offs) v[displaced(shape, y, o.j)] = 1.0;
    return {make(s, std::move(v)), R, 0.0, PotentialKind::indicator};
}

double capacity_profile_mass(double R, double L) { return kPi * (L * L - R * R) / (2.0 * std::log(L / R)); }

double capacity_laplacian_mass(double R, double L) { return 2.0 * kPi / std::log(L / R); }

GeomReport verify_geom_claims(const GridFunction& chi, double R, double L, const GeomOptions& opt) {
    const GridSpec& s = chi.spec();
    require(is_binary(chi), "verify_geom_claims needs a binary function");
    const double hd = s.cell_volume();
    GeomReport g;
    auto omega = density_set(chi, R);
    g.cover = maximal_packing(s, omega, R);
    const bool log_kind = s.d == 2;
    g.potential = log_kind ? capacity_potential(g.cover, R, L) : indicator_potential(g.cover, R);
    const GridFunction& phi = g.potential.phi;
    const double N = static_cast<double>(g.cover.count());

    const double mass = chi.integral();
    const double tv = tv_norm(chi, TvMode::anisotropic);
    ExactSum in_omega, chi_phi;
    for (std::size_t i = 0; i < chi.size(); ++i) {
        if (omega[i]) in_omega.add(chi[i]);
        chi_phi.add(chi[i] * phi[i]);
    }
    const double deficit = mass - in_omega.value() * hd;
    Mollified m = mollify(chi, MollifierKernel::hard_disc(s, R));

    g.claims.push_back(row("claim1-split", deficit, 2.0 * m.l1_change, opt.identity_tol));
    g.claims.push_back(row("claim1-mollify", m.l1_change, R * tv, opt.identity_tol));
    g.claims.push_back(row("claim1", deficit, 2.0 * R * tv, opt.band));
    g.claims.push_back(row("claim2-cover", g.cover.covers ? 0.0 : 1.0, 0.0, 0.0));
    g.claims.push_back(row("claim2-count", N * ball_volume(s.d, R / 2.0), 2.0 * mass, opt.band));
    g.claims.push_back(row("claim3", mass - chi_phi.value() * hd, 2.0 * R * tv, opt.band));

    if (log_kind) {
        GridFunction lap = neg_laplacian(phi);
        ExactSum pos, grad2, pairing;
        for (std::size_t i = 0; i < phi.size(); ++i) {
            pos.add(std::max(lap[i], 0.0));
            pairing.add(lap[i] * phi[i]);
            Index3 c = phi.coords(i);
            for (int a = 0; a < s.d; ++a) {
                Index3 e = c;
                ++e[a];
                double dq = (phi[phi.index(e)] - phi[i]) / s.h();
                grad2.add(dq * dq);
            }
        }
        const double pos_mass = pos.value() * hd;
        const double dirichlet = grad2.value() * hd;
        g.claims.push_back(row("claim4", phi.integral(), N * capacity_profile_mass(R, L), opt.band));
        g.claims.push_back(row("claim5", pos_mass, N * capacity_laplacian_mass(R, L), opt.band));
        g.claims.push_back(row("eq4", dirichlet, pos_mass, opt.identity_tol));
        ClaimRow ident = row("eq2a-identity", dirichlet, pairing.value() * hd, opt.identity_tol);
        ident.pass = std::abs(ident.lhs - ident.rhs) <= opt.identity_tol * std::max(std::abs(ident.rhs), 1e-300) ||
                     ident.lhs == ident.rhs;
        g.claims.push_back(ident);
    } else {
        g.claims.push_back(row("claim4", phi.integral(), N * ball_volume(s.d, R), opt.band));
    }
    for (const auto& c : g.claims) g.pass = g.pass && c.pass;
    return g;
}

std::string cover_csv(const BallCover& cover) {
    std::string out = "i,y_x,y_y,R\n";
    GridFunction shape = GridFunction::constant(cover.spec, 0.0);
    char buf[128];
    for (std::size_t t = 0; t < cover.centers.size(); ++t) {
        auto x = shape.center(cover.centers[t]);
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", t, x[0], cover.spec.d > 1 ? x[1] : 0.0,
                      cover.radius);
        out += buf;
    }
    return out;
}

std::string claims_csv(const std::vector<ClaimRow>& rows) {
    std::string out = "claim_id,lhs,rhs,ratio,pass\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%d\n", r.id.c_str(), r.lhs, r.rhs, r.ratio, r.pass ? 1 : 0);
        out += buf;
    }
    return out;
}

}  // namespace ineqlab
