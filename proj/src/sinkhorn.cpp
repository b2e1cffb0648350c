#include "ineqlab/sinkhorn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ineqlab/error.hpp"
#include "ineqlab/exact_sum.hpp"

namespace ineqlab {
namespace {

double log_sum_exp(const std::vector<double>& x) {
    double mx = -std::numeric_limits<double>::infinity();
    for (double v : x) mx = std::max(mx, v);
    if (!std::isfinite(mx)) return mx;
    double s = 0.0;
    for (double v : x) s += std::exp(v - mx);
    return mx + std::log(s);
}

}  // namespace

SinkhornSolution sinkhorn(const std::vector<double>& a, const std::vector<double>& b, const std::vector<double>& cost,
                          double epsilon, int iterations) {
    const std::size_t m = a.size(), k = b.size();
    require(m > 0 && k > 0 && cost.size() == m * k, "sinkhorn: shape mismatch");
    require(epsilon > 0.0, "sinkhorn: epsilon must be positive");
    require(iterations > 0, "sinkhorn: iterations must be positive");

    double cmax = 0.0;
    for (double c : cost) cmax = std::max(cmax, c);
    const double total = exact_sum(a);
    std::vector<double> la(m), lb(k);
    for (std::size_t i = 0; i < m; ++i) la[i] = std::log(a[i]);
    for (std::size_t j = 0; j < k; ++j) lb[j] = std::log(b[j]);

    std::vector<double> f(m, 0.0), g(k, 0.0), buf;
    SinkhornSolution out;

    auto update_f = [&](double eps) {
        buf.resize(k);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < k; ++j) buf[j] = lb[j] + (g[j] - cost[i * k + j]) / eps;
            f[i] = -eps * log_sum_exp(buf);
        }
    };
    auto update_g = [&](double eps) {
        buf.resize(m);
        for (std::size_t j = 0; j < k; ++j) {
            for (std::size_t i = 0; i < m; ++i) buf[i] = la[i] + (f[i] - cost[i * k + j]) / eps;
            g[j] = -eps * log_sum_exp(buf);
        }
    };
    auto row_residual = [&](double eps) {
        double r = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < k; ++j) s += std::exp(la[i] + lb[j] + (f[i] + g[j] - cost[i * k + j]) / eps);
            r += std::abs(s - a[i]);
        }
        return r;
    };

    // epsilon scaling: halve from cmax down to the target
    double eps = std::max(cmax, epsilon);
    while (true) {
        const bool last = eps <= epsilon;
        const int its = last ? iterations : 20;
        for (int t = 0; t < its; ++t) {
            update_f(eps);
            update_g(eps);
            ++out.iterations;
            if (last && t % 10 == 9 && row_residual(eps) <= 1e-13 * total) break;
        }
        if (last) break;
        eps = std::max(epsilon, eps / 2);
    }

    // unrounded plan and its marginal residuals
    std::vector<double> P(m * k);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < k; ++j)
            P[i * k + j] = std::exp(la[i] + lb[j] + (f[i] + g[j] - cost[i * k + j]) / epsilon);
    std::vector<double> r(m, 0.0), c(k, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            r[i] += P[i * k + j];
            c[j] += P[i * k + j];
        }
    for (std::size_t i = 0; i < m; ++i) out.row_residual += std::abs(r[i] - a[i]);
    for (std::size_t j = 0; j < k; ++j) out.col_residual += std::abs(c[j] - b[j]);

    // rounding onto the exact marginals (Altschuler, Weed, Rigollet)
    for (std::size_t i = 0; i < m; ++i) {
        double x = r[i] > a[i] ? a[i] / r[i] : 1.0;
        for (std::size_t j = 0; j < k; ++j) P[i * k + j] *= x;
    }
    std::fill(c.begin(), c.end(), 0.0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < k; ++j) c[j] += P[i * k + j];
    for (std::size_t j = 0; j < k; ++j) {
        double y = c[j] > b[j] ? b[j] / c[j] : 1.0;
        for (std::size_t i = 0; i < m; ++i) P[i * k + j] *= y;
    }
    std::vector<double> er(a), ec(b);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            er[i] -= P[i * k + j];
            ec[j] -= P[i * k + j];
        }
    double er1 = 0.0;
    for (double& x : er) {
        x = std::max(x, 0.0);
        er1 += x;
    }
    for (double& x : ec) x = std::max(x, 0.0);
    if (er1 > 0.0)
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < k; ++j) P[i * k + j] += er[i] * ec[j] / er1;

    ExactSum primal;
    for (std::size_t e = 0; e < P.size(); ++e) primal.add(P[e] * cost[e]);
    out.primal = primal.value();

    // double c-transform of g certifies a feasible dual
    out.phi.assign(m, std::numeric_limits<double>::infinity());
    out.psi.assign(k, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < k; ++j) out.phi[i] = std::min(out.phi[i], cost[i * k + j] - g[j]);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < k; ++j) out.psi[j] = std::min(out.psi[j], cost[i * k + j] - out.phi[i]);
    ExactSum dual;
    for (std::size_t i = 0; i < m; ++i) dual.add(a[i] * out.phi[i]);
    for (std::size_t j = 0; j < k; ++j) dual.add(b[j] * out.psi[j]);
    out.dual = dual.value();

    out.declared_bound = 2.0 * epsilon * total * std::log(static_cast<double>(m * k)) +
                         4.0 * cmax * (out.row_residual + out.col_residual);
    out.plan = std::move(P);
    return out;
}

}  // namespace ineqlab
