#include "ineqlab/scaling.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <boost/rational.hpp>

#include "ineqlab/error.hpp"
#include "ineqlab/norms.hpp"
#include "ineqlab/transport.hpp"

namespace ineqlab {

namespace {

struct Parsed {
    std::string kind;
    double param = 0.0;
};

Parsed parse_functional(const std::string& id) {
    const auto colon = id.find(':');
    Parsed p{id.substr(0, colon), 0.0};
    const bool has_param = colon != std::string::npos;
    if (p.kind == "tv" || p.kind == "w2") {
        require(!has_param, "functional " + p.kind + " takes no parameter");
        return p;
    }
    if (p.kind == "lp" || p.kind == "weak" || p.kind == "spectral") {
        require(has_param, "functional " + p.kind + " needs a parameter, e.g. " + p.kind + ":4/3");
        p.param = parse_number(id.substr(colon + 1));
        return p;
    }
    throw PreconditionError("unknown functional: " + id);
}

double evaluate(const Parsed& f, const GridFunction& u, const GridFunction* v) {
    if (f.kind == "lp") return lp_norm(u, f.param);
    if (f.kind == "weak") return weak_lp_norm(u, f.param).value;
    if (f.kind == "tv") return tv_norm(u);
    if (f.kind == "spectral") return spectral_norm(u, f.param);
    require(v != nullptr, "w2 needs a second density");
    return w2_squared(u, *v).value;
}

double rel_dev(double measured, double predicted) {
    if (measured == predicted) return 0.0;
    return std::abs(measured - predicted) / std::max(std::abs(measured), std::abs(predicted));
}

using Q = boost::rational<long long>;

std::string str(const Q& q) {
    std::ostringstream os;
    os << q.numerator();
    if (q.denominator() != 1) os << "/" << q.denominator();
    return os.str();
}

// Exponent pair over two symbols, e.g. (sigma, t).
struct Pair {
    Q x, y;
    Pair operator+(const Pair& o) const { return {x + o.x, y + o.y}; }
    Pair operator-(const Pair& o) const { return {x - o.x, y - o.y}; }
    Pair operator*(const Q& c) const { return {x * c, y * c}; }
    bool operator==(const Pair& o) const { return x == o.x && y == o.y; }
};

std::string str(const Pair& p) { return "(" + str(p.x) + "; " + str(p.y) + ")"; }

}  // namespace

double parse_number(const std::string& s) {
    require(!s.empty(), "empty number");
    if (s == "inf") return std::numeric_limits<double>::infinity();
    const auto slash = s.find('/');
    std::size_t used = 0;
    try {
        if (slash == std::string::npos) {
            const double x = std::stod(s, &used);
            require(used == s.size(), "malformed number: " + s);
            return x;
        }
        const std::string a = s.substr(0, slash), b = s.substr(slash + 1);
        std::size_t ua = 0, ub = 0;
        const double num = std::stod(a, &ua), den = std::stod(b, &ub);
        require(ua == a.size() && ub == b.size() && den != 0.0, "malformed number: " + s);
        return num / den;
    } catch (const std::logic_error& e) {
        if (dynamic_cast<const PreconditionError*>(&e)) throw;
        throw PreconditionError("malformed number: " + s);
    }
}

ScalingReport homogeneity_check(const std::string& functional, const GridFunction& u, double ell, double M,
                                const GridFunction* v) {
    const Parsed f = parse_functional(functional);
    require(ell > 0.0 && M > 0.0, "homogeneity needs ell > 0 and M > 0");
    const int d = u.spec().d;
    ScalingReport r;
    r.functional = functional;
    r.ell = ell;
    r.M = M;
    r.b = 1.0;
    r.tol = kQuadratureTol;
    if (f.kind == "lp" || f.kind == "weak") {
        r.a = std::isinf(f.param) ? 0.0 : d / f.param;
    } else if (f.kind == "tv") {
        r.a = d - 1.0;
    } else if (f.kind == "spectral") {
        r.a = d / 2.0 - f.param;
        r.tol = kSpectralTol;
    } else {
        r.a = d + 2.0;
        r.tol = kExactW2Tol;
    }
    r.predicted = std::pow(ell, r.a) * std::pow(M, r.b);
    const GridFunction du = dilate(u, ell, M);
    GridFunction dv;
    if (v) dv = dilate(*v, ell, M);
    const double base = evaluate(f, u, v);
    const double scaled = evaluate(f, du, v ? &dv : nullptr);
    if (base == 0.0) {
        r.measured = scaled == 0.0 ? r.predicted : std::numeric_limits<double>::infinity();
    } else {
        r.measured = scaled / base;
    }
    r.deviation = rel_dev(r.measured, r.predicted);
    r.pass = r.deviation <= r.tol;
    return r;
}

std::vector<ScalingReport> extensivity_check(IneqId id, const GridFunction& u, int k) {
    require(k == 2 || k == 3, "extensivity needs k in {2, 3}");
    const GridFunction t = tile(u, k);
    const int d = u.spec().d;
    const double kd = std::pow(static_cast<double>(k), d);
    std::vector<ScalingReport> rows;
    // value(u) -> per-volume density; extensive quantities scale by k^d.
    auto add = [&](const std::string& name, double a, double b, double tol) {
        ScalingReport r;
        r.functional = name;
        r.k = k;
        r.predicted = 1.0;
        r.tol = tol;
        if (a == 0.0 && b == 0.0) {
            r.measured = 1.0;
        } else {
            r.measured = a == 0.0 ? std::numeric_limits<double>::infinity() : b / (kd * a);
        }
        r.deviation = rel_dev(r.measured, 1.0);
        r.pass = r.deviation <= r.tol;
        rows.push_back(r);
    };
    auto lp_int = [](const GridFunction& f, double p) { return std::pow(lp_norm(f, p), p); };
    auto hm2 = [](const GridFunction& f, double s) {
        const double x = spectral_norm(f, s, Symbol::lattice);
        return x * x;
    };
    switch (id) {
        case IneqId::prop1:
        case IneqId::gn:
        case IneqId::weak1:
            add("lp:4/3", lp_int(u, 4.0 / 3.0), lp_int(t, 4.0 / 3.0), kQuadratureTol);
            add("tv", tv_norm(u), tv_norm(t), kQuadratureTol);
            add("spectral:-1", hm2(u, -1.0), hm2(t, -1.0), kSpectralTol);
            break;
        case IneqId::prop2:
        case IneqId::weaklog:
            add("log_l43", lp_int(u.map([](double x) { return x * std::pow(std::log(std::max(x, std::exp(1.0))), 0.25); }),
                                  4.0 / 3.0),
                lp_int(t.map([](double x) { return x * std::pow(std::log(std::max(x, std::exp(1.0))), 0.25); }),
                       4.0 / 3.0),
                kQuadratureTol);
            add("tv", tv_norm(u), tv_norm(t), kQuadratureTol);
            add("spectral:-1", hm2(u, -1.0), hm2(t, -1.0), kSpectralTol);
            break;
        case IneqId::geomest:
            add("volume", u.integral(), t.integral(), kQuadratureTol);
            add("tv", tv_norm(u), tv_norm(t), kQuadratureTol);
            add("spectral:-1", hm2(u - u.mean(), -1.0), hm2(t - t.mean(), -1.0), kSpectralTol);
            break;
        case IneqId::prop3:
        case IneqId::prop4:
        case IneqId::prop5:
            add("lp:" + std::to_string(prop3_lhs_exponent(d)), lp_int(u, prop3_lhs_exponent(d)),
                lp_int(t, prop3_lhs_exponent(d)), kQuadratureTol);
            add("tv", tv_norm(u), tv_norm(t), kQuadratureTol);
            add("w2_to_uniform", w2_to_uniform(u), w2_to_uniform(t), kTiledW2Tol);
            break;
    }
    return rows;
}

CoarseningReport coarsening_bound(const GridFunction& u, double constant) {
    for (double x : u.values()) require(x == 1.0 || x == -1.0, "coarsening needs values in {-1, 1}");
    CoarseningReport r;
    r.mean = u.mean();
    r.constant = constant;
    require(has_zero_mean(u), "coarsening needs mean zero: the Hdot^-1 norm is undefined otherwise");
    r.product = tv_norm(u) * spectral_norm(u, -1.0, Symbol::lattice);
    const double l = lp_norm(u, 4.0 / 3.0);
    r.l43_squared = l * l;
    r.ratio = r.product / r.l43_squared;
    r.pass = r.ratio >= constant * (1.0 - kPassRounding);
    return r;
}

std::vector<ExponentRow> regime_exponents() {
    std::vector<ExponentRow> rows;
    auto row = [&](const std::string& name, const auto& value, const auto& expected) {
        rows.push_back({name, str(value), str(expected), value == expected});
    };
    const Q one(1), two(2), three(3);
    const long long d = 2;

    // Statement exponents at d = 2.
    const Q thr(3 * d + 1, 3 * d + 3), power(3 * d + 3, 3 * d + 1), w2e(2, d + 1), he(1 - d, d + 1);
    row("threshold exponent (3d+1)/(3d+3)", thr, Q(7, 9));
    row("lhs power (3d+3)/(3d+1)", power, Q(9, 7));
    row("w2 weight 2/(d+1)", w2e, Q(2, 3));
    row("half-norm weight (1-d)/(d+1)", he, Q(-1, 3));
    row("prop3 exponent (2+3d)/(3d)", Q(2 + 3 * d, 3 * d), Q(4, 3));

    // Regime 3: u = M u_hat, x = ell x_hat with ell = M = nu^a, then multiply
    // by nu^{4/9}. Factors: int (u - .)_+^P dx ~ ell^d M^P, tv ~ ell^{d-1} M,
    // W2^2 ~ ell^{d+2} M, half-norm^2 ~ ell^{d+1} M^2.
    const Q a(-2, 9), mult(4, 9);
    row("regime3 lhs nu exponent", a * (Q(d) + power) + mult, Q(-2, 7));
    row("regime3 rescaled threshold", thr - a, one);
    row("regime3 tv nu exponent", a * Q(d - 1 + 1) + mult, Q(0));
    row("regime3 w2 nu exponent", w2e + a * Q(d + 2 + 1) + mult, Q(0));
    row("regime3 half-norm nu exponent", he + a * Q(d + 1 + 2) + mult, Q(-1));

    // Regime 2: Young 2/3-1/3, prop3 on u = chi/Phi with |{u > 2}| ~ Phi.
    const Q young_tv(2, 3), young_w(1, 3);
    row("regime2 Young weights sum", young_tv + young_w, one);
    row("regime2 prop3 rhs exponents raised to 4/3",
        Pair{Q(2 * d, 2 + 3 * d) * Q(2 + 3 * d, 3 * d), Q(d, 2 + 3 * d) * Q(2 + 3 * d, 3 * d)},
        Pair{young_tv, young_w});
    // E >~ Phi^{young_tv + young_w} (tv_u^{2/3} W_u^{1/3}) and
    // ||(u - 2)_+||_{4/3}^{4/3} ~ Phi^{1 - 4/3}.
    row("regime2 Phi exponent", (young_tv + young_w) + (one - Q(4, 3)), Q(2, 3));
    // Crossover Phi^{2/3} = Phi nu^{-2/7}.
    row("regime2/3 crossover Phi ~ nu^x", Q(-2, 7) / (Q(2, 3) - one), Q(6, 7));

    // Nondimensionalization of the anisotropic ferromagnet energy, exponents
    // over (sigma, t) with sigma = d Q^{1/2}: per-area wall term sigma t / X
    // and stray term X^2 / t balance at X^3 = sigma t^2.
    const Pair X{one / three, two / three};
    const Pair wall = Pair{one, one} - X;
    const Pair stray = X * two - Pair{Q(0), one};
    row("nondim length", X, Pair{Q(1, 3), Q(2, 3)});
    row("nondim wall term", wall, Pair{Q(2, 3), Q(1, 3)});
    row("nondim stray term", stray, Pair{Q(2, 3), Q(1, 3)});

    // Superconductor rescaling x' ~ t^{2/3}, x3 ~ t, B' ~ t^{-1/3} inside and
    // x ~ t^{2/3}, B ~ t^{-1/3} outside; the outer term carries 1/nu with
    // nu = t^{1/3}.
    const Q interface = Q(-2, 3) + Q(4, 3) + one;  // |grad' chi| dx
    const Q kinetic = Q(-2, 3) + Q(4, 3) + one;    // chi |B'|^2 dx
    const Q outer = Q(-2, 3) + Q(2);               // |B - Phi e3|^2 dx
    row("superconductor interface vs kinetic", interface - kinetic, Q(0));
    row("superconductor outer relative exponent (1/nu, nu = t^{1/3})", outer - interface, Q(-1, 3));

    // Regime 1: the ln^{1/4} weight inside the 4/3 norm gives ln^{1/3}.
    row("regime1 log power", Q(1, 4) * Q(4, 3), Q(1, 3));
    return rows;
}

std::string scaling_csv(const std::vector<ScalingReport>& rows) {
    std::string out = "functional,ell,M,k,a,b,predicted,measured,deviation,tol,pass\n";
    char buf[512];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n",
                      r.functional.c_str(), r.ell, r.M, r.k, r.a, r.b, r.predicted, r.measured, r.deviation, r.tol,
                      r.pass ? 1 : 0);
        out += buf;
    }
    return out;
}

std::string exponents_csv(const std::vector<ExponentRow>& rows) {
    std::string out = "name,value,expected,pass\n";
    for (const auto& r : rows) out += r.name + "," + r.value + "," + r.expected + "," + (r.pass ? "1" : "0") + "\n";
    return out;
}

}  // namespace ineqlab
