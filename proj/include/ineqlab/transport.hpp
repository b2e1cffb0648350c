#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ineqlab/grid.hpp"

namespace ineqlab {

// Cell masses (density * h^d) of a nonnegative grid density.
struct DiscreteMeasure {
    GridSpec spec;
    std::vector<double> masses;
    double total = 0.0;

    static DiscreteMeasure from_density(const GridFunction& u);
};

struct PlanEntry {
    std::size_t src, dst;  // cell indices
    double mass;
};

struct TransportPlan {
    std::vector<PlanEntry> entries;
    double cost = 0.0;  // sum mass * dist^2
};

// Potentials on every cell; off the supports they are c-transform extensions.
struct DualPotentials {
    std::vector<double> phi, psi;
    double feasibility_slack = 0.0;  // min over checked pairs of dist^2 - phi - psi
};

enum class TransportMethod { exact, sinkhorn };

struct TransportOptions {
    TransportMethod method = TransportMethod::exact;
    double epsilon = 0.01;     // sinkhorn target regularization, in units of dist^2
    int iterations = 2000;     // sinkhorn iterations at the target epsilon
    std::size_t support_cap = 4096;  // max support cells per side for the exact solver
    bool renormalize = false;  // rescale v to the mass of u before solving
};

struct TransportResult {
    double value = 0.0;  // exact: optimal cost; sinkhorn: cost of the rounded feasible plan
    double dual_value = 0.0;
    double gap = 0.0;    // value - dual_value
    TransportPlan plan;
    DualPotentials duals;
    double row_residual = 0.0;  // L1 marginal residuals of the unrounded sinkhorn plan
    double col_residual = 0.0;
    double declared_bound = 0.0;  // sinkhorn: bound on gap stated before solving
    std::uint64_t iterations = 0;
};

// Squared periodic distance between the centers of cells a and b.
double cell_dist2(const GridSpec& s, std::size_t a, std::size_t b);

TransportResult w2_squared(const GridFunction& u, const GridFunction& v, const TransportOptions& opt = {});
double w2_to_uniform(const GridFunction& u, const TransportOptions& opt = {});

// primal cost - dual value after checking both certificates; throws on an
// infeasible plan or potentials.
double duality_gap(const TransportPlan& plan, const DualPotentials& duals, const GridFunction& u,
                   const GridFunction& v);

std::string plan_csv(const TransportPlan& plan);
std::string plan_summary_json(const TransportResult& r);

}  // namespace ineqlab
