#include "ineqlab/transport.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "ineqlab/error.hpp"
#include "ineqlab/exact_sum.hpp"
#include "ineqlab/network_simplex.hpp"
#include "ineqlab/sinkhorn.hpp"

namespace ineqlab {
namespace {

constexpr double kMassTol = 1e-9;
constexpr std::size_t kSinkhornDenseCap = std::size_t{1} << 25;

std::vector<std::size_t> support(const std::vector<double>& masses) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < masses.size(); ++i)
        if (masses[i] > 0.0) s.push_back(i);
    return s;
}

// Squared periodic distance in units of h^2 between two cells.
class CellCost {
public:
    explicit CellCost(const GridSpec& s) : s_(s) {
        GridFunction shape = GridFunction::constant(s, 0.0);
        coords_.resize(shape.size());
        for (std::size_t i = 0; i < shape.size(); ++i) coords_[i] = shape.coords(i);
    }

    double operator()(std::size_t a, std::size_t b) const {
        const Index3& x = coords_[a];
        const Index3& y = coords_[b];
        int s = 0;
        for (int k = 0; k < s_.d; ++k) {
            int t = std::abs(x[k] - y[k]);
            t = std::min(t, s_.n - t);
            s += t * t;
        }
        return s;
    }
    double max() const { return s_.d * std::floor(s_.n / 2.0) * std::floor(s_.n / 2.0); }

private:
    GridSpec s_;
    std::vector<Index3> coords_;
};

void check_inputs(const GridFunction& u, const GridFunction& v) {
    require(u.spec() == v.spec(), "transport inputs live on different grids");
    for (double x : u.values()) require(x >= 0.0, "negative density in source");
    for (double x : v.values()) require(x >= 0.0, "negative density in target");
}

// Extends support potentials to every cell by the c-transform.
std::vector<double> extend(const std::vector<double>& partial, const std::vector<std::size_t>& own,
                           const std::vector<double>& other, const std::vector<std::size_t>& other_support,
                           std::size_t cells, const CellCost& cost, double h2) {
    std::vector<double> full(cells, 0.0);
    std::vector<bool> on(cells, false);
    for (std::size_t t = 0; t < own.size(); ++t) {
        full[own[t]] = partial[t];
        on[own[t]] = true;
    }
    for (std::size_t x = 0; x < cells; ++x) {
        if (on[x]) continue;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < other_support.size(); ++t)
            best = std::min(best, h2 * cost(x, other_support[t]) - other[t]);
        full[x] = best;
    }
    return full;
}

}  // namespace

DiscreteMeasure DiscreteMeasure::from_density(const GridFunction& u) {
    DiscreteMeasure m;
    m.spec = u.spec();
    const double hd = u.spec().cell_volume();
    m.masses.resize(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        require(u[i] >= 0.0, "negative density");
        m.masses[i] = u[i] * hd;
    }
    m.total = exact_sum(m.masses);
    return m;
}

double cell_dist2(const GridSpec& s, std::size_t a, std::size_t b) {
    CellCost c(s);
    return c(a, b) * s.h() * s.h();
}

TransportResult w2_squared(const GridFunction& u, const GridFunction& v_in, const TransportOptions& opt) {
    check_inputs(u, v_in);
    GridFunction v = v_in;
    DiscreteMeasure mu = DiscreteMeasure::from_density(u);
    DiscreteMeasure nu = DiscreteMeasure::from_density(v);
    if (opt.renormalize && nu.total > 0.0 && mu.total > 0.0) {
        v = v * (mu.total / nu.total);
        nu = DiscreteMeasure::from_density(v);
    }
    const double scale = std::max(mu.total, nu.total);
    require(std::abs(mu.total - nu.total) <= kMassTol * scale, "total masses differ beyond 1e-9 relative");

    const GridSpec& s = u.spec();
    const double h2 = s.h() * s.h();
    TransportResult r;
    r.duals.phi.assign(u.size(), 0.0);
    r.duals.psi.assign(u.size(), 0.0);
    if (scale == 0.0) return r;

    const auto src = support(mu.masses);
    const auto dst = support(nu.masses);
    std::vector<double> a, b;
    for (auto i : src) a.push_back(mu.masses[i]);
    for (auto j : dst) b.push_back(nu.masses[j]);
    CellCost cost(s);

    std::vector<double> phi, psi;
    if (opt.method == TransportMethod::exact) {
        require(src.size() <= opt.support_cap && dst.size() <= opt.support_cap,
                "support of " + std::to_string(std::max(src.size(), dst.size())) +
                    " cells exceeds the exact-solver cap of " + std::to_string(opt.support_cap));
        TransportSimplex ns(a, b, [&](std::size_t i, std::size_t j) { return cost(src[i], dst[j]); }, cost.max());
        ns.solve();
        r.iterations = ns.pivots();
        ExactSum primal;
        for (const auto& arc : ns.flows()) {
            r.plan.entries.push_back({src[arc.src], dst[arc.dst], arc.flow});
            primal.add(arc.flow * cost(src[arc.src], dst[arc.dst]));
        }
        r.plan.cost = primal.value() * h2;
        for (double p : ns.phi()) phi.push_back(p * h2);
        for (double p : ns.psi()) psi.push_back(p * h2);
        r.value = r.plan.cost;
    } else {
        require(src.size() * dst.size() <= kSinkhornDenseCap, "support too large for the dense sinkhorn solver");
        std::vector<double> C(src.size() * dst.size());
        for (std::size_t i = 0; i < src.size(); ++i)
            for (std::size_t j = 0; j < dst.size(); ++j) C[i * dst.size() + j] = h2 * cost(src[i], dst[j]);
        SinkhornSolution sol = sinkhorn(a, b, C, opt.epsilon, opt.iterations);
        for (std::size_t i = 0; i < src.size(); ++i)
            for (std::size_t j = 0; j < dst.size(); ++j) {
                double m = sol.plan[i * dst.size() + j];
                if (m > 0.0) r.plan.entries.push_back({src[i], dst[j], m});
            }
        r.plan.cost = sol.primal;
        r.value = sol.primal;
        phi = sol.phi;
        psi = sol.psi;
        r.row_residual = sol.row_residual;
        r.col_residual = sol.col_residual;
        r.declared_bound = sol.declared_bound;
        r.iterations = sol.iterations;
    }

    ExactSum dual;
    for (std::size_t t = 0; t < src.size(); ++t) dual.add(a[t] * phi[t]);
    for (std::size_t t = 0; t < dst.size(); ++t) dual.add(b[t] * psi[t]);
    r.dual_value = dual.value();
    r.gap = r.value - r.dual_value;

    double slack = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < src.size(); ++i)
        for (std::size_t j = 0; j < dst.size(); ++j)
            slack = std::min(slack, h2 * cost(src[i], dst[j]) - phi[i] - psi[j]);
    r.duals.feasibility_slack = slack;
    r.duals.phi = extend(phi, src, psi, dst, u.size(), cost, h2);
    r.duals.psi = extend(psi, dst, phi, src, u.size(), cost, h2);
    return r;
}

double w2_to_uniform(const GridFunction& u, const TransportOptions& opt) {
    require(std::abs(u.mean() - 1.0) <= 1e-9, "w2_to_uniform needs mean(u) = 1");
    return w2_squared(u, GridFunction::constant(u.spec(), 1.0), opt).value;
}

double duality_gap(const TransportPlan& plan, const DualPotentials& duals, const GridFunction& u,
                   const GridFunction& v) {
    check_inputs(u, v);
    DiscreteMeasure mu = DiscreteMeasure::from_density(u);
    DiscreteMeasure nu = DiscreteMeasure::from_density(v);
    const GridSpec& s = u.spec();
    require(duals.phi.size() == u.size() && duals.psi.size() == u.size(), "potentials do not match the grid");
    const double scale = std::max({mu.total, nu.total, std::numeric_limits<double>::min()});

    std::vector<double> rows(u.size(), 0.0), cols(u.size(), 0.0);
    ExactSum primal;
    CellCost cost(s);
    const double h2 = s.h() * s.h();
    for (const auto& e : plan.entries) {
        require(e.src < u.size() && e.dst < u.size(), "plan entry outside the grid");
        require(e.mass >= 0.0, "negative plan mass");
        rows[e.src] += e.mass;
        cols[e.dst] += e.mass;
        primal.add(e.mass * h2 * cost(e.src, e.dst));
    }
    for (std::size_t i = 0; i < u.size(); ++i) {
        require(std::abs(rows[i] - mu.masses[i]) <= kMassTol * scale, "plan row marginal differs from source");
        require(std::abs(cols[i] - nu.masses[i]) <= kMassTol * scale, "plan column marginal differs from target");
    }
    const auto src = support(mu.masses);
    const auto dst = support(nu.masses);
    const double tol = 1e-9 * std::max(1.0, cost.max() * h2);
    for (auto i : src)
        for (auto j : dst)
            require(duals.phi[i] + duals.psi[j] <= h2 * cost(i, j) + tol, "potentials violate phi + psi <= dist^2");
    ExactSum dual;
    for (auto i : src) dual.add(mu.masses[i] * duals.phi[i]);
    for (auto j : dst) dual.add(nu.masses[j] * duals.psi[j]);
    return primal.value() - dual.value();
}

std::string plan_csv(const TransportPlan& plan) {
    std::string out = "src_index,dst_index,mass\n";
    char buf[96];
    for (const auto& e : plan.entries) {
        std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g\n", e.src, e.dst, e.mass);
        out += buf;
    }
    return out;
}

std::string plan_summary_json(const TransportResult& r) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "{\"value\": %.17g, \"dual\": %.17g, \"gap\": %.17g, \"entries\": %zu}", r.value,
                  r.dual_value, r.gap, r.plan.entries.size());
    return buf;
}

}  // namespace ineqlab
