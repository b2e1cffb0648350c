#include "ineqlab/families.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ineqlab/error.hpp"
#include "ineqlab/rng.hpp"

namespace ineqlab {
namespace {

double unit_ball_volume(int d) {
    switch (d) {
        case 1: return 2.0;
        case 2: return std::numbers::pi;
        default: return 4.0 * std::numbers::pi / 3.0;
    }
}

int as_int(double x, const std::string& what) {
    require(std::isfinite(x) && x == std::floor(x), what + " must be an integer");
    return static_cast<int>(x);
}

// Sorted distinct cut positions in (0, n); block b spans [cut_b, cut_{b+1}).
std::vector<int> random_cuts(CounterRng& rng, int n, int blocks) {
    blocks = std::clamp(blocks, 1, n);
    std::vector<int> pool(n - 1);
    for (int i = 0; i < n - 1; ++i) pool[i] = i + 1;
    // partial Fisher-Yates
    for (int i = 0; i < blocks - 1; ++i) {
        int j = rng.uniform_int(i, n - 2);
        std::swap(pool[i], pool[j]);
    }
    std::vector<int> cuts(pool.begin(), pool.begin() + (blocks - 1));
    cuts.push_back(0);
    std::sort(cuts.begin(), cuts.end());
    return cuts;
}

int block_of(const std::vector<int>& cuts, int i) {
    return static_cast<int>(std::upper_bound(cuts.begin(), cuts.end(), i) - cuts.begin()) - 1;
}

GridFunction random_fourier(const FamilySpec& f) {
    const GridSpec& g = f.grid;
    const int modes = as_int(f.param("modes", 8), "modes");
    const int kmax = std::min(as_int(f.param("kmax", 4), "kmax"), std::max(1, g.n / 2 - 1));
    const double amp = f.param("amplitude", 1.0);
    require(modes >= 1 && kmax >= 1, "random-fourier needs modes >= 1 and kmax >= 1");
    CounterRng rng(f.seed, 1);
    struct Mode { Index3 k; double a, phase; };
    std::vector<Mode> ms;
    for (int m = 0; m < modes; ++m) {
        Mode md{{0, 0, 0}, 0.0, 0.0};
        do {
            for (int a = 0; a < g.d; ++a) md.k[a] = rng.uniform_int(-kmax, kmax);
        } while (md.k[0] == 0 && md.k[1] == 0 && md.k[2] == 0);
        md.a = amp * rng.normal();
        md.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
        ms.push_back(md);
    }
    GridFunction u = GridFunction::sample(g, [&](const std::array<double, 3>& x) {
        double s = 0.0;
        for (const auto& md : ms) {
            double arg = md.phase;
            for (int a = 0; a < g.d; ++a) arg += 2.0 * std::numbers::pi * md.k[a] * x[a] / g.lambda;
            s += md.a * std::cos(arg);
        }
        return s;
    });
    return u - u.mean();
}

GridFunction random_steps(const FamilySpec& f) {
    const GridSpec& g = f.grid;
    const int blocks = as_int(f.param("blocks", 6), "blocks");
    const int levels = as_int(f.param("levels", 3), "levels");
    require(blocks >= 1 && levels >= 1, "random-steps needs blocks >= 1 and levels >= 1");
    CounterRng rng(f.seed, 2);
    std::vector<std::vector<int>> cuts;
    int nb = 1;
    for (int a = 0; a < g.d; ++a) {
        cuts.push_back(random_cuts(rng, g.n, blocks));
        nb *= static_cast<int>(cuts.back().size());
    }
    std::vector<double> level(nb);
    for (double& l : level) l = rng.uniform_int(-levels, levels);
    GridFunction shape = GridFunction::constant(g, 0.0);
    std::vector<double> v(g.cells());
    for (std::size_t i = 0; i < v.size(); ++i) {
        Index3 c = shape.coords(i);
        int b = 0;
        for (int a = 0; a < g.d; ++a) b = b * static_cast<int>(cuts[a].size()) + block_of(cuts[a], c[a]);
        v[i] = level[b];
    }
    return GridFunction(g, std::move(v));
}

GridFunction stripe(const FamilySpec& f) {
    const GridSpec& g = f.grid;
    const int width = as_int(f.param("width", g.n / 2), "width");
    require(width >= 0 && width <= g.n, "stripe width must lie in [0, n]");
    const double a = f.param("a", 1.0), b = f.param("b", 0.0);
    GridFunction shape = GridFunction::constant(g, 0.0);
    std::vector<double> v(g.cells());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = shape.coords(i)[0] < width ? a : b;
    return GridFunction(g, std::move(v));
}

GridFunction single_bump(const FamilySpec& f) {
    const GridSpec& g = f.grid;
    const double r = f.param("radius", g.lambda / 4);
    const double amp = f.param("amplitude", 1.0);
    require(r > 0.0 && r <= g.lambda / 2, "single-bump radius must lie in (0, lambda/2]");
    CounterRng rng(f.seed, 3);
    std::array<double, 3> c{0.0, 0.0, 0.0};
    for (int a = 0; a < g.d; ++a) c[a] = g.lambda / 2 + rng.uniform(-0.5, 0.5) * g.h();
    return GridFunction::sample(g, [&](const std::array<double, 3>& x) {
        double t = 1.0 - torus_dist2(x, c, g.d, g.lambda) / (r * r);
        return t > 0.0 ? amp * t * t : 0.0;
    });
}

GridFunction ostwald(const FamilySpec& f) {
    const GridSpec& g = f.grid;
    const double phi = f.param("phi", 0.0);
    require(phi > 0.0 && phi < 1.0, "ostwald needs 0 < phi < 1");
    GridFunction chi = ball_lattice_indicator(g, phi, as_int(f.param("per_axis", 1), "per_axis"),
                                              f.param("jitter", 0.0), f.seed);
    const double count = chi.mean() * static_cast<double>(chi.size());
    require(count >= 1.0 && count < static_cast<double>(chi.size()), "ostwald balls resolve to no cells");
    // Use the realized fraction so the mean is zero on the grid.
    const double phi_a = count / static_cast<double>(chi.size());
    const double top = (1.0 - phi_a) / phi_a;
    return chi.map([top](double x) { return x > 0.5 ? top : -1.0; });
}

GridFunction branching_stripes(const FamilySpec& f) {
    const GridSpec& g = f.grid;
    require(g.d >= 2, "branching-stripes needs d >= 2");
    const int levels = as_int(f.param("levels", 3), "levels");
    const int period = as_int(f.param("period", g.n / 2), "period");
    require(levels >= 1 && levels <= g.n, "branching-stripes levels out of range");
    require(period >= 2, "branching-stripes period must be >= 2");
    GridFunction shape = GridFunction::constant(g, 0.0);
    std::vector<double> v(g.cells());
    for (std::size_t i = 0; i < v.size(); ++i) {
        Index3 c = shape.coords(i);
        int band = std::min(levels - 1, c[g.d - 1] * levels / g.n);
        int p = std::max(2, period >> band);
        v[i] = (c[0] % p) < p / 2 ? 1.0 : -1.0;
    }
    return GridFunction(g, std::move(v));
}

}  // namespace

std::string family_name(Family f) {
    switch (f) {
        case Family::random_fourier: return "random-fourier";
        case Family::random_steps: return "random-steps";
        case Family::stripe: return "stripe";
        case Family::ball_lattice: return "ball-lattice";
        case Family::single_bump: return "single-bump";
        case Family::ostwald: return "ostwald";
        case Family::branching_stripes: return "branching-stripes";
    }
    return "?";
}

Family parse_family(const std::string& name) {
    for (Family f : {Family::random_fourier, Family::random_steps, Family::stripe, Family::ball_lattice,
                     Family::single_bump, Family::ostwald, Family::branching_stripes})
        if (family_name(f) == name) return f;
    throw PreconditionError("unknown family '" + name + "'");
}

double FamilySpec::param(const std::string& key, double fallback) const {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

GridFunction ball_lattice_indicator(const GridSpec& grid, double phi, int per_axis, double jitter, std::uint64_t seed) {
    grid.validate();
    require(phi > 0.0 && phi < 1.0, "ball fraction must lie in (0, 1)");
    require(per_axis >= 1, "need at least one ball per axis");
    require(jitter >= 0.0 && jitter <= 1.0, "jitter must lie in [0, 1]");
    const int d = grid.d;
    const double spacing = grid.lambda / per_axis;
    int balls = 1;
    for (int a = 0; a < d; ++a) balls *= per_axis;
    const double r = std::pow(phi * grid.volume() / (balls * unit_ball_volume(d)), 1.0 / d);
    require(r < spacing / 2, "balls would overlap at this fraction");

    CounterRng rng(seed, 4);
    std::vector<std::array<double, 3>> centers;
    for (int b = 0; b < balls; ++b) {
        std::array<double, 3> c{0.0, 0.0, 0.0};
        int rest = b;
        for (int a = d - 1; a >= 0; --a) {
            int j = rest % per_axis;
            rest /= per_axis;
            double off = jitter * (spacing / 2 - r) * rng.uniform(-1.0, 1.0);
            c[a] = (j + 0.5) * spacing + off;
        }
        centers.push_back(c);
    }
    const double r2 = r * r;
    return GridFunction::sample(grid, [&](const std::array<double, 3>& x) {
        for (const auto& c : centers)
            if (torus_dist2(x, c, d, grid.lambda) <= r2) return 1.0;
        return 0.0;
    });
}

GridFunction generate(const FamilySpec& spec) {
    spec.grid.validate();
    switch (spec.id) {
        case Family::random_fourier: return random_fourier(spec);
        case Family::random_steps: return random_steps(spec);
        case Family::stripe: return stripe(spec);
        case Family::ball_lattice:
            return ball_lattice_indicator(spec.grid, spec.param("phi", 0.0),
                                          as_int(spec.param("per_axis", 1), "per_axis"), spec.param("jitter", 0.0),
                                          spec.seed);
        case Family::single_bump: return single_bump(spec);
        case Family::ostwald: return ostwald(spec);
        case Family::branching_stripes: return branching_stripes(spec);
    }
    throw PreconditionError("unknown family");
}

}  // namespace ineqlab
