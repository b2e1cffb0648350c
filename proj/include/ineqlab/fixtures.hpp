#pragma once

#include <limits>
#include <map>
#include <string>
#include <vector>

#include "ineqlab/calibration.hpp"

namespace ineqlab {

// Committed constants and tolerance bands.
struct Fixtures {
    std::map<std::string, double> constants;
    std::map<std::string, double> bands;
    std::map<std::string, double> kernel;  // reference bump constants

    double constant(const std::string& key) const;
    double band(const std::string& key) const;
    // Constant for a check of id; gn is keyed by q. Infinite when absent.
    double constant_for(IneqId id, double q = 1.0) const;
};

// INEQLAB_FIXTURES if set, else the in-repo file.
std::string default_fixtures_path();
Fixtures load_fixtures(const std::string& path = default_fixtures_path());
void save_fixtures(const Fixtures& f, const std::string& path);

// gn fixture key for exponent q: gn_q1, gn_q2, gn_q4, gn_qinf.
std::string gn_key(double q);
inline const std::vector<double> kGnExponents{1.0, 2.0, 4.0, std::numeric_limits<double>::infinity()};

// Frozen seed sets, already mapped into the domain of id. gn and weak1 share
// the prop1 set; weaklog shares the prop2 set.
std::vector<Instance> frozen_instances(IneqId id);

// Prop 5 sweep: 50 (u, v, nu) triples at d = 2 with
// Phi = nu^{7/9} / (2 kProp5Budget).
constexpr double kProp5Budget = 20.0;

// Recomputes every constant from the frozen sets; bands are copied.
Fixtures recalibrate(const Fixtures& current);

}  // namespace ineqlab
