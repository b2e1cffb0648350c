#include "ineqlab/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "ineqlab/error.hpp"
#include "ineqlab/exact_sum.hpp"
#include "ineqlab/level_geometry.hpp"
#include "ineqlab/norms.hpp"
#include "ineqlab/transport.hpp"

namespace ineqlab {
namespace {

constexpr double kMeanTol = 1e-9;

void require_mean_zero(const GridFunction& u, const std::string& id) {
    require(has_zero_mean(u), id + " needs mean zero");
}

void require_nonneg(const GridFunction& u, const std::string& what) {
    require(u.min() >= 0.0, what + " must be nonnegative");
}

double positive_part_power_integral(const GridFunction& u, double threshold, double power) {
    ExactSum s;
    for (double x : u.values())
        if (x > threshold) s.add(std::pow(x - threshold, power));
    return s.value() * u.spec().cell_volume();
}

GridFunction clamp_nonneg(const GridFunction& u) {
    return u.map([](double x) { return std::max(x, 0.0); });
}

// ||(v - mean v)||^2 in the -1/2 norm; the k = 0 mode is dropped either way.
double half_norm2(const GridFunction& v) {
    double h = spectral_norm(v - v.mean(), -0.5);
    return h * h;
}

void check_prop1(InequalityReport& r, const GridFunction& u) {
    require_mean_zero(u, "prop1");
    r.lhs = lp_norm(u, 4.0 / 3.0);
    r.rhs = gn_rhs(u, 1.0);
}

void check_gn(InequalityReport& r, const GridFunction& u, double q) {
    require(q >= 1.0, "gn needs q >= 1");
    require_mean_zero(u, "gn");
    const double p = std::isinf(q) ? 4.0 : 4.0 * q / (2.0 + q);
    r.terms["p"] = p;
    r.terms["q"] = q;
    r.lhs = lp_norm(u, p);
    r.rhs = gn_rhs(u, q);
}

void check_weak1(InequalityReport& r, const GridFunction& u) {
    require_mean_zero(u, "weak1");
    r.lhs = weak_lp_norm(u, 4.0 / 3.0).value;
    r.rhs = gn_rhs(u, 1.0);
}

void require_prop2_domain(const GridFunction& u, const std::string& id) {
    require(u.spec().d == 2, id + " needs d = 2");
    require(u.min() >= -1.0 - 1e-12, id + " needs u >= -1");
    require_mean_zero(u, id);
}

void check_geomest(InequalityReport& r, const GridFunction& chi) {
    require(is_binary(chi), "geomest needs a binary chi");
    const double phi = chi.mean();
    require(phi < 0.5, "geomest needs volume fraction below 1/2");
    const double vol = chi.spec().volume();
    r.terms["phi"] = phi;
    r.lhs = phi > 0.0 ? phi * std::cbrt(std::log(1.0 / phi)) : 0.0;
    const double tv = tv_norm(chi) / vol;
    const double hm1 = spectral_norm(chi - phi, -1.0, Symbol::lattice);
    r.terms["tv_per_volume"] = tv;
    r.terms["hm1_per_volume"] = hm1 * hm1 / vol;
    r.rhs = std::cbrt(tv * tv) * std::cbrt(hm1 * hm1 / vol);
}

void require_prop3_domain(const GridFunction& u) {
    require_nonneg(u, "prop3 input");
    require(std::abs(u.mean() - 1.0) <= kMeanTol, "prop3 needs mean 1");
}

// Pass threshold is the prefactor; the same C is the level in (u - C)_+.
void check_prop3(InequalityReport& r, const GridFunction& u, double C) {
    require_prop3_domain(u);
    require(C > 0.0, "prop3 needs C > 0");
    const int d = u.spec().d;
    const double tv = tv_norm(u);
    const double w2 = w2_to_uniform(u);
    r.terms["threshold"] = C;
    r.terms["tv"] = tv;
    r.terms["w2"] = w2;
    r.lhs = prop3_lhs(u, C);
    r.rhs = std::pow(tv, 2.0 * d / (2.0 + 3.0 * d)) * std::pow(w2, d / (2.0 + 3.0 * d));
}

void check_prop5(InequalityReport& r, const GridFunction& u, const GridFunction& v, double nu, double C) {
    require(u.spec() == v.spec(), "prop5 inputs live on different grids");
    require_nonneg(u, "prop5 u");
    require_nonneg(v, "prop5 v");
    require(nu > 0.0, "prop5 needs nu > 0");
    const double phi = u.mean();
    require(std::abs(v.mean() - phi) <= kMeanTol * std::max(1.0, phi), "prop5 needs equal means of u and v");
    const int d = u.spec().d;
    const double thr = std::pow(nu, prop5_threshold_exponent(d));
    if (std::isfinite(C)) require(phi <= thr / (2.0 * C), "prop5 needs Phi <= nu^((3d+1)/(3d+3)) / (2 C)");
    const double tv = tv_norm(u);
    const double w2 = w2_squared(u, v).value;
    const double hv = half_norm2(v);
    r.terms["phi"] = phi;
    r.terms["nu"] = nu;
    r.terms["tv"] = tv;
    r.terms["w2"] = w2;
    r.terms["half_norm2"] = hv;
    r.lhs = positive_part_power_integral(u, thr, prop5_lhs_power(d));
    r.rhs = tv + std::pow(nu, prop5_w2_exponent(d)) * w2 + std::pow(nu, prop5_h_exponent(d)) * hv;
}

void check_prop4(InequalityReport& r, const GridFunction& u, const CheckParams& p) {
    require_nonneg(u, "prop4 input");
    require(!p.nu_grid.empty(), "prop4 needs a nonempty nu grid");
    const GridSpec& s = u.spec();
    const int d = s.d;
    std::vector<double> scales = p.scales;
    if (scales.empty()) scales = {2 * s.h(), 4 * s.h(), 8 * s.h()};
    std::vector<GridFunction> family{u};
    for (double R : scales) {
        GridFunction v = clamp_nonneg(mollify(u, MollifierKernel::smooth_bump(s, R)).value);
        family.push_back(v * (u.integral() / std::max(v.integral(), 1e-300)));
    }
    std::vector<double> w2s, hs;
    for (const auto& v : family) {
        w2s.push_back(w2_squared(u, v).value);
        hs.push_back(half_norm2(v));
    }
    double sup = 0.0;
    for (double nu : p.nu_grid) {
        require(nu > 0.0, "prop4 nu grid must be positive");
        double inf = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < family.size(); ++j)
            inf = std::min(inf, std::pow(nu, 2.0 / (d + 1)) * w2s[j] + std::pow(nu, (1.0 - d) / (d + 1)) * hs[j]);
        sup = std::max(sup, inf);
    }
    const double tv = tv_norm(u);
    r.terms["tv"] = tv;
    r.terms["sup_inf"] = sup;
    r.terms["family_size"] = static_cast<double>(family.size());
    r.lhs = lp_norm(u, (3.0 * d + 3.0) / (3.0 * d + 1.0));
    r.rhs = std::pow(tv, 2.0 * d / (3.0 * d + 3.0)) * std::cbrt(sup);
    r.certified = false;
}

}  // namespace

std::string ineq_name(IneqId id) {
    switch (id) {
        case IneqId::prop1: return "prop1";
        case IneqId::gn: return "gn";
        case IneqId::weak1: return "weak1";
        case IneqId::prop2: return "prop2";
        case IneqId::weaklog: return "weaklog";
        case IneqId::geomest: return "geomest";
        case IneqId::prop3: return "prop3";
        case IneqId::prop5: return "prop5";
        case IneqId::prop4: return "prop4";
    }
    return "?";
}

IneqId parse_ineq(const std::string& name) {
    for (IneqId id : {IneqId::prop1, IneqId::gn, IneqId::weak1, IneqId::prop2, IneqId::weaklog, IneqId::geomest,
                      IneqId::prop3, IneqId::prop5, IneqId::prop4})
        if (ineq_name(id) == name) return id;
    throw PreconditionError("unknown inequality id: " + name);
}

double prop3_lhs_exponent(int d) { return (2.0 + 3.0 * d) / (3.0 * d); }
double prop5_lhs_power(int d) { return (3.0 * d + 3.0) / (3.0 * d + 1.0); }
double prop5_threshold_exponent(int d) { return (3.0 * d + 1.0) / (3.0 * d + 3.0); }
double prop5_w2_exponent(int d) { return 2.0 / (d + 1.0); }
double prop5_h_exponent(int d) { return (1.0 - d) / (d + 1.0); }

void set_ratio(InequalityReport& r) {
    r.zero_over_zero = r.lhs == 0.0 && r.rhs == 0.0;
    if (r.zero_over_zero)
        r.ratio = 0.0;
    else if (r.rhs == 0.0)
        r.ratio = std::numeric_limits<double>::infinity();
    else
        r.ratio = r.lhs / r.rhs;
    bool ok = std::isinf(r.constant) ? std::isfinite(r.ratio) : r.ratio <= r.constant * (1.0 + kPassRounding);
    for (const auto& s : r.steps) ok = ok && s.pass;
    r.pass = ok;
}

double prop3_lhs(const GridFunction& u, double C) {
    const double p = prop3_lhs_exponent(u.spec().d);
    return std::pow(positive_part_power_integral(u, C, p), 1.0 / p);
}

void add_step(InequalityReport& r, const std::string& step, double lhs, double rhs, double tol) {
    TraceStep s{step, lhs, rhs, rhs - lhs, tol, true};
    s.pass = std::isfinite(s.slack) && s.slack >= -tol;
    r.steps.push_back(s);
}

InequalityReport check(IneqId id, const GridFunction& u, const CheckParams& p, const GridFunction* v) {
    InequalityReport r;
    r.id = ineq_name(id);
    r.constant = p.constant;
    switch (id) {
        case IneqId::prop1: check_prop1(r, u); break;
        case IneqId::gn: check_gn(r, u, p.q); break;
        case IneqId::weak1: check_weak1(r, u); break;
        case IneqId::prop2:
            require_prop2_domain(u, "prop2");
            r.lhs = log_weighted_l43(u);
            r.rhs = gn_rhs(u, 1.0);
            break;
        case IneqId::weaklog:
            require_prop2_domain(u, "weaklog");
            r.lhs = weak_log_norm(u).value;
            r.rhs = gn_rhs(u, 1.0);
            break;
        case IneqId::geomest: check_geomest(r, u); break;
        case IneqId::prop3: check_prop3(r, u, p.threshold); break;
        case IneqId::prop5:
            require(v != nullptr, "prop5 needs a second density v");
            check_prop5(r, u, *v, p.nu, p.constant);
            break;
        case IneqId::prop4: check_prop4(r, u, p); break;
    }
    set_ratio(r);
    if (id == IneqId::prop4) r.terms["cross_reference_prop5"] = 1.0;
    return r;
}

GridFunction prepare_input(IneqId id, const GridFunction& u) {
    auto normalized = [&]() {
        GridFunction w = u - u.min();
        const double m = w.mean();
        return m > 0.0 ? w * (1.0 / m) : GridFunction::constant(u.spec(), 1.0);
    };
    switch (id) {
        case IneqId::prop1:
        case IneqId::gn:
        case IneqId::weak1: return u - u.mean();
        case IneqId::prop2:
        case IneqId::weaklog: return normalized() - 1.0;
        case IneqId::prop3:
        case IneqId::prop5:
        case IneqId::prop4: return normalized();
        case IneqId::geomest: return is_binary(u) ? u : u.map([](double x) { return x > 0.0 ? 1.0 : 0.0; });
    }
    return u;
}

std::string report_csv_header() { return "id,family,seed,lhs,rhs,ratio,pass\n"; }

std::string report_csv_row(const InequalityReport& r) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s,%s,%llu,%.17g,%.17g,%.17g,%d\n", r.id.c_str(), r.family.c_str(),
                  static_cast<unsigned long long>(r.seed), r.lhs, r.rhs, r.ratio, r.pass ? 1 : 0);
    return buf;
}

std::string trace_csv(const InequalityReport& r) {
    std::string out = "id,step,lhs,rhs,slack\n";
    char buf[256];
    for (const auto& s : r.steps) {
        std::snprintf(buf, sizeof buf, "%s,%s,%.17g,%.17g,%.17g\n", r.id.c_str(), s.step.c_str(), s.lhs, s.rhs,
                      s.slack);
        out += buf;
    }
    return out;
}

}  // namespace ineqlab
