#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ineqlab/grid.hpp"
#include "ineqlab/inequalities.hpp"

namespace ineqlab {

// One input of a sweep, already in the domain of the inequality.
struct Instance {
    std::string family;
    std::uint64_t seed = 0;
    std::string input;  // parameters, free-form
    GridFunction u;
    GridFunction v;  // prop5 second density; empty otherwise
    double nu = 1.0;
};

struct StabilityMetrics {
    double refine = 0.0;  // relative ratio drift at the argmax under refine(., 2)
    double tile = 0.0;    // tile(., 2)
    double dilate = 0.0;  // dilate(., 2, 1)
};

struct CalibrationResult {
    std::string id;
    std::string sweep;
    double constant = 0.0;  // max observed ratio; the bisected C for prop3
    std::size_t argmax = 0;
    std::string argmax_config;
    std::vector<double> ratios;
    StabilityMetrics stability;
    // prop3 only: (threshold, minimal prefactor) pairs with the threshold
    // decoupled from the prefactor.
    std::vector<std::pair<double, double>> relaxation;
    // extremize only: best parameters and best-so-far ratio per evaluation.
    std::vector<double> best_params;
    std::vector<double> trace;
};

constexpr double kBisectionTol = 1e-3;

// Requires at least 10 instances. For prop3 the common threshold/prefactor C
// is bisected to the minimal value passing the whole sweep.
CalibrationResult calibrate(IneqId id, const std::vector<Instance>& sweep, const CheckParams& base = {},
                            const std::string& description = "");

// Continuous parameter family on a box; make() returns a raw field that is
// passed through prepare_input before checking.
struct ParamFamily {
    std::string name;
    std::vector<double> lo;
    std::vector<double> hi;
    std::function<GridFunction(const std::vector<double>&)> make;
};

// stripe-width: one stripe of width w*lambda along axis 0, w in [0.02, 0.98],
//   cells partially covered take the covered fraction.
// bump-radius: disc of radius r*lambda, r in [0.05, 0.45], edge cells linear in
//   the signed distance.
// two-stripe: stripes of widths (w, w/2) with amplitudes (1, a), w in
//   [0.05, 0.6], a in [-1, 1].
ParamFamily param_family(const std::string& name, const GridSpec& grid);

// Multi-start Nelder-Mead maximizing the ratio. Starts are a Latin hypercube
// drawn from seed; budget counts local-search evaluations beyond the starts.
CalibrationResult extremize(IneqId id, const ParamFamily& family, int budget, std::uint64_t seed, int starts = 8,
                            const CheckParams& base = {});

std::string calibration_csv(const CalibrationResult& r);

}  // namespace ineqlab
