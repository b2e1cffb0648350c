#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "ineqlab/grid.hpp"

namespace ineqlab {

enum class IneqId { prop1, gn, weak1, prop2, weaklog, geomest, prop3, prop5, prop4 };

std::string ineq_name(IneqId id);
IneqId parse_ineq(const std::string& name);

struct TraceStep {
    std::string step;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;  // rhs - lhs
    double tol = 0.0;    // absolute allowance: pass iff slack >= -tol
    bool pass = true;
};

struct InequalityReport {
    std::string id;
    std::string family;
    std::uint64_t seed = 0;
    std::string input;  // free-form parameters
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    bool zero_over_zero = false;
    double constant = std::numeric_limits<double>::infinity();
    bool certified = true;
    bool pass = true;
    std::vector<TraceStep> steps;
    std::map<std::string, double> terms;
};

struct CheckParams {
    double q = 1.0;          // gn exponent
    double threshold = 1.0;  // prop3 C in (u - C)_+
    double nu = 1.0;         // prop5
    std::vector<double> nu_grid{0.25, 0.5, 1.0, 2.0, 4.0};  // prop4 sup over nu
    std::vector<double> scales;  // prop4 mollification radii (physical units); empty means 2h, 4h, 8h
    // Pass iff ratio <= constant (1 + rounding). Infinite means any finite ratio
    // passes and the prop5 fraction constraint is not checked.
    double constant = std::numeric_limits<double>::infinity();
};

constexpr double kPassRounding = 1e-9;

// lhs/rhs with 0/0 = 0 (flagged) and x/0 = inf.
void set_ratio(InequalityReport& r);
void add_step(InequalityReport& r, const std::string& step, double lhs, double rhs, double tol = 0.0);

// Direct check. u is the primary input; v is the second density for prop5.
InequalityReport check(IneqId id, const GridFunction& u, const CheckParams& p = {}, const GridFunction* v = nullptr);

// Normalizes an arbitrary field into the domain of id: mean zero for
// prop1/gn/weak1, (u - min)/mean(u - min) - 1 for prop2/weaklog, and
// (u - min)/mean(u - min) for prop3/prop5/prop4. geomest keeps binary fields
// and maps others to the indicator of {u > 0}.
GridFunction prepare_input(IneqId id, const GridFunction& u);

// Exponents hard-coded per statement.
double prop3_lhs_exponent(int d);            // (2 + 3d)/(3d)
// ||(u - C)_+||_{(2+3d)/(3d)}
double prop3_lhs(const GridFunction& u, double C);
double prop5_lhs_power(int d);               // (3d + 3)/(3d + 1)
double prop5_threshold_exponent(int d);      // (3d + 1)/(3d + 3)
double prop5_w2_exponent(int d);             // 2/(d + 1)
double prop5_h_exponent(int d);              // (1 - d)/(d + 1)

// Traces. Every step carries slack = rhs - lhs; report.pass is the conjunction
// of the step passes.
struct TraceOptions {
    int mu_count = 16;
    double band = 0.1;         // relative allowance on continuum constants
    double identity_tol = 1e-9;
};

InequalityReport ledoux_trace(const GridFunction& u, double M, const TraceOptions& opt = {});
// M is the lower end of the mu grid (M >= e).
InequalityReport prop2_trace(const GridFunction& u, double M, const TraceOptions& opt = {});
InequalityReport prop3_trace(const GridFunction& u, double eps, const TraceOptions& opt = {});
// constant is the prop5 fixture constant used both in the fraction
// constraint and as the prefactor of the assembled inequality.
InequalityReport prop5_trace(const GridFunction& u, const GridFunction& v, double nu, double constant,
                             const TraceOptions& opt = {});

// Claim A for f(mu) = sum_i w_i mu^{a} 1{mu < b_i}: lower and upper dyadic
// sums and the middle integral int_1^inf f dmu/mu, all in closed form.
struct ClaimASandwich {
    double lower = 0.0;
    double middle = 0.0;
    double upper = 0.0;
};
ClaimASandwich claim_a_power_steps(double a, const std::vector<double>& weights, const std::vector<double>& cutoffs);

// Claim B constant 2^p/(2^p - 1).
double claim_b_constant(double p);

std::string report_csv_header();
std::string report_csv_row(const InequalityReport& r);
std::string trace_csv(const InequalityReport& r);

}  // namespace ineqlab
