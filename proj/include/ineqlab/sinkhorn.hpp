#pragma once

#include <cstdint>
#include <vector>

namespace ineqlab {

struct SinkhornSolution {
    std::vector<double> plan;  // dense m x k, feasible after rounding
    std::vector<double> phi, psi;  // c-transformed potentials, phi_i + psi_j <= C_ij
    double primal = 0.0;       // <C, plan>
    double dual = 0.0;         // sum a phi + sum b psi
    double row_residual = 0.0; // L1, before rounding
    double col_residual = 0.0;
    double declared_bound = 0.0;
    std::uint64_t iterations = 0;
};

// Log-domain Sinkhorn with epsilon scaling on a dense cost matrix (row-major
// m x k). The plan is rounded onto the exact marginals and the dual is
// certified by a double c-transform.
SinkhornSolution sinkhorn(const std::vector<double>& a, const std::vector<double>& b, const std::vector<double>& cost,
                          double epsilon, int iterations);

}  // namespace ineqlab
