#include "ineqlab/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "ineqlab/error.hpp"
#include "ineqlab/parallel.hpp"
#include "ineqlab/rng.hpp"

namespace ineqlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

InequalityReport run(IneqId id, const Instance& in, const CheckParams& base) {
    CheckParams p = base;
    p.nu = in.nu;
    auto r = check(id, in.u, p, in.v.size() > 0 ? &in.v : nullptr);
    r.family = in.family;
    r.seed = in.seed;
    r.input = in.input;
    return r;
}

double drift(double a, double b) {
    if (a == b) return 0.0;
    return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

Instance transformed(const Instance& in, const std::function<GridFunction(const GridFunction&)>& t) {
    Instance out = in;
    out.u = t(in.u);
    if (in.v.size() > 0) out.v = t(in.v);
    return out;
}

std::string describe(const Instance& in) {
    std::string s = in.family + " seed=" + std::to_string(in.seed);
    if (!in.input.empty()) s += " " + in.input;
    return s;
}

void fill_argmax(CalibrationResult& res) {
    res.argmax = 0;
    for (std::size_t i = 1; i < res.ratios.size(); ++i)
        if (res.ratios[i] > res.ratios[res.argmax]) res.argmax = i;
}

}  // namespace

CalibrationResult calibrate(IneqId id, const std::vector<Instance>& sweep, const CheckParams& base,
                            const std::string& description) {
    require(!sweep.empty(), "calibrate: empty sweep");
    require(sweep.size() >= 10, "calibrate needs at least 10 instances");
    CalibrationResult res;
    res.id = ineq_name(id);
    res.sweep = description;
    CheckParams p = base;
    p.constant = kInf;

    if (id == IneqId::prop3) {
        // rhs does not depend on C; lhs(C) is nonincreasing, so
        // g(C) = max_i lhs_i(C)/rhs_i - C is decreasing.
        std::vector<double> rhs(sweep.size());
        parallel_for(sweep.size(), [&](std::size_t i) {
            CheckParams q = p;
            q.threshold = std::max(1.0, sweep[i].u.max());
            rhs[i] = run(id, sweep[i], q).rhs;
        });
        auto worst = [&](double C) {
            double w = 0.0;
            for (std::size_t i = 0; i < sweep.size(); ++i) {
                const double l = prop3_lhs(sweep[i].u, C);
                if (l == 0.0) continue;
                w = std::max(w, rhs[i] > 0.0 ? l / rhs[i] : kInf);
            }
            return w;
        };
        double lo = 0.0, hi = 0.0;
        for (const auto& in : sweep) hi = std::max(hi, in.u.max());
        while (hi - lo > kBisectionTol) {
            const double mid = 0.5 * (lo + hi);
            (worst(mid) <= mid ? hi : lo) = mid;
        }
        res.constant = hi;
        for (std::size_t i = 0; i < sweep.size(); ++i) {
            const double l = prop3_lhs(sweep[i].u, hi);
            res.ratios.push_back(l == 0.0 ? 0.0 : (rhs[i] > 0.0 ? l / rhs[i] : kInf));
        }
        for (double T : {1.0, 2.0, 4.0, 8.0}) res.relaxation.push_back({T, worst(T)});
        res.relaxation.push_back({hi, worst(hi)});
        p.threshold = hi;
    } else {
        res.ratios.resize(sweep.size());
        parallel_for(sweep.size(), [&](std::size_t i) { res.ratios[i] = run(id, sweep[i], p).ratio; });
        res.constant = *std::max_element(res.ratios.begin(), res.ratios.end());
    }
    fill_argmax(res);
    const Instance& top = sweep[res.argmax];
    res.argmax_config = describe(top);

    const double r0 = res.ratios[res.argmax];
    auto ratio_of = [&](const Instance& in) {
        try {
            return run(id, in, p).ratio;
        } catch (const PreconditionError&) {
            return kInf;
        }
    };
    res.stability.refine = drift(r0, ratio_of(transformed(top, [](const GridFunction& u) { return refine(u, 2); })));
    res.stability.tile = drift(r0, ratio_of(transformed(top, [](const GridFunction& u) { return tile(u, 2); })));
    res.stability.dilate =
        drift(r0, ratio_of(transformed(top, [](const GridFunction& u) { return dilate(u, 2.0, 1.0); })));
    return res;
}

ParamFamily param_family(const std::string& name, const GridSpec& grid) {
    grid.validate();
    ParamFamily f;
    f.name = name;
    const double h = grid.h();
    auto coverage = [h](double x, double a, double b) {
        // length of [x, x + h] inside [a, b], relative to h
        return std::max(0.0, std::min(x + h, b) - std::max(x, a)) / h;
    };
    if (name == "stripe-width") {
        f.lo = {0.02};
        f.hi = {0.98};
        f.make = [grid, coverage, h](const std::vector<double>& x) {
            const double w = x[0] * grid.lambda;
            return GridFunction::sample(grid, [&](const std::array<double, 3>& c) {
                return coverage(c[0] - 0.5 * h, 0.0, w);
            });
        };
    } else if (name == "bump-radius") {
        f.lo = {0.05};
        f.hi = {0.45};
        f.make = [grid, h](const std::vector<double>& x) {
            const double r = x[0] * grid.lambda;
            return GridFunction::sample(grid, [&](const std::array<double, 3>& c) {
                double d2 = 0.0;
                for (int a = 0; a < grid.d; ++a) d2 += (c[a] - 0.5 * grid.lambda) * (c[a] - 0.5 * grid.lambda);
                return std::clamp((r - std::sqrt(d2)) / h + 0.5, 0.0, 1.0);
            });
        };
    } else if (name == "two-stripe") {
        f.lo = {0.05, -1.0};
        f.hi = {0.6, 1.0};
        f.make = [grid, coverage, h](const std::vector<double>& x) {
            const double w = x[0] * grid.lambda;
            return GridFunction::sample(grid, [&](const std::array<double, 3>& c) {
                const double left = c[0] - 0.5 * h;
                return coverage(left, 0.0, w) + x[1] * coverage(left, w, 1.5 * w);
            });
        };
    } else {
        throw PreconditionError("unknown parameter family: " + name);
    }
    return f;
}

namespace {

struct Evaluator {
    IneqId id;
    const ParamFamily& fam;
    CheckParams p;

    std::vector<double> clamp(std::vector<double> x) const {
        for (std::size_t j = 0; j < x.size(); ++j) x[j] = std::clamp(x[j], fam.lo[j], fam.hi[j]);
        return x;
    }

    double operator()(const std::vector<double>& x) const {
        try {
            return check(id, prepare_input(id, fam.make(clamp(x))), p).ratio;
        } catch (const PreconditionError&) {
            return -kInf;
        }
    }
};

struct LocalRun {
    std::vector<double> best;
    double best_value = -kInf;
    std::vector<std::pair<std::vector<double>, double>> evals;
};

// Nelder-Mead on -f with box clamping, stopping after budget evaluations.
LocalRun nelder_mead(const Evaluator& f, std::vector<double> x0, double f0, int budget) {
    LocalRun run;
    run.best = x0;
    run.best_value = f0;
    if (budget <= 0) return run;
    const std::size_t k = x0.size();
    int used = 0;
    auto eval = [&](const std::vector<double>& x) {
        const auto xc = f.clamp(x);
        const double v = f(xc);
        ++used;
        run.evals.push_back({xc, v});
        if (v > run.best_value) {
            run.best_value = v;
            run.best = xc;
        }
        return v;
    };
    std::vector<std::vector<double>> simplex{x0};
    std::vector<double> val{f0};
    for (std::size_t j = 0; j < k && used < budget; ++j) {
        auto x = x0;
        const double step = 0.1 * (f.fam.hi[j] - f.fam.lo[j]);
        x[j] = x0[j] + step <= f.fam.hi[j] ? x0[j] + step : x0[j] - step;
        simplex.push_back(x);
        val.push_back(eval(x));
    }
    if (simplex.size() < k + 1) return run;
    while (used < budget) {
        std::vector<std::size_t> order(k + 1);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return val[a] > val[b]; });
        const std::size_t worst = order.back();
        double size = 0.0;
        for (std::size_t i = 1; i <= k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                size = std::max(size, std::abs(simplex[order[i]][j] - simplex[order[0]][j]) /
                                          (f.fam.hi[j] - f.fam.lo[j]));
        if (size < 1e-9) break;
        std::vector<double> c(k, 0.0);
        for (std::size_t i = 0; i + 1 < order.size(); ++i)
            for (std::size_t j = 0; j < k; ++j) c[j] += simplex[order[i]][j] / k;
        auto along = [&](double t) {
            std::vector<double> x(k);
            for (std::size_t j = 0; j < k; ++j) x[j] = c[j] + t * (simplex[worst][j] - c[j]);
            return f.clamp(x);
        };
        const auto xr = along(-1.0);
        const double vr = eval(xr);
        if (vr > val[order[0]] && used < budget) {
            const auto xe = along(-2.0);
            const double ve = eval(xe);
            if (ve > vr) {
                simplex[worst] = xe;
                val[worst] = ve;
            } else {
                simplex[worst] = xr;
                val[worst] = vr;
            }
        } else if (vr > val[order[k - 1]]) {
            simplex[worst] = xr;
            val[worst] = vr;
        } else if (used < budget) {
            const auto xc = along(vr > val[worst] ? -0.5 : 0.5);
            const double vc = eval(xc);
            if (vc > std::max(vr, val[worst])) {
                simplex[worst] = xc;
                val[worst] = vc;
            } else {
                for (std::size_t i = 1; i <= k && used < budget; ++i) {
                    auto& x = simplex[order[i]];
                    for (std::size_t j = 0; j < k; ++j) x[j] = 0.5 * (x[j] + simplex[order[0]][j]);
                    val[order[i]] = eval(x);
                }
            }
        }
    }
    return run;
}

std::string format_params(const std::string& name, const std::vector<double>& x) {
    std::string s = name;
    char buf[64];
    for (std::size_t j = 0; j < x.size(); ++j) {
        std::snprintf(buf, sizeof buf, " x%zu=%.17g", j, x[j]);
        s += buf;
    }
    return s;
}

}  // namespace

CalibrationResult extremize(IneqId id, const ParamFamily& family, int budget, std::uint64_t seed, int starts,
                            const CheckParams& base) {
    require(budget >= 0, "extremize: budget must be nonnegative");
    require(starts >= 1, "extremize needs at least one start");
    require(!family.lo.empty() && family.lo.size() == family.hi.size(), "extremize needs a continuous parameter box");
    const std::size_t k = family.lo.size();
    CheckParams p = base;
    p.constant = kInf;
    Evaluator f{id, family, p};

    // Latin hypercube: coordinate j of start i sits in stratum perm_j[i].
    CounterRng rng(seed, 0x65787472ull);
    std::vector<std::vector<double>> xs(starts, std::vector<double>(k));
    for (std::size_t j = 0; j < k; ++j) {
        std::vector<int> perm(starts);
        std::iota(perm.begin(), perm.end(), 0);
        for (int i = starts - 1; i > 0; --i) std::swap(perm[i], perm[rng.uniform_int(0, i)]);
        for (int i = 0; i < starts; ++i)
            xs[i][j] = family.lo[j] + (perm[i] + rng.uniform()) / starts * (family.hi[j] - family.lo[j]);
    }
    std::vector<double> fs(starts);
    parallel_for(static_cast<std::size_t>(starts), [&](std::size_t i) { fs[i] = f(xs[i]); });

    std::vector<std::size_t> order(starts);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fs[a] > fs[b]; });
    std::vector<LocalRun> runs(starts);
    parallel_for(static_cast<std::size_t>(starts), [&](std::size_t r) {
        const int share = budget / starts + (static_cast<int>(r) < budget % starts ? 1 : 0);
        runs[r] = nelder_mead(f, xs[order[r]], fs[order[r]], share);
    });

    CalibrationResult res;
    res.id = ineq_name(id);
    res.sweep = family.name + " budget=" + std::to_string(budget) + " seed=" + std::to_string(seed) +
                " starts=" + std::to_string(starts);
    std::vector<std::vector<double>> points;
    for (int i = 0; i < starts; ++i) {
        points.push_back(xs[i]);
        res.ratios.push_back(fs[i]);
    }
    for (const auto& r : runs)
        for (const auto& [x, v] : r.evals) {
            points.push_back(x);
            res.ratios.push_back(v);
        }
    double best = -kInf;
    for (double v : res.ratios) res.trace.push_back(best = std::max(best, v));
    fill_argmax(res);
    res.constant = res.ratios[res.argmax];
    res.best_params = points[res.argmax];
    res.argmax_config = format_params(family.name, res.best_params);
    return res;
}

std::string calibration_csv(const CalibrationResult& r) {
    auto field = [](std::string s) {
        std::replace(s.begin(), s.end(), ',', ';');
        return s;
    };
    std::string out = "id,sweep,constant,argmax,refine_drift,tile_drift,dilate_drift\n";
    char buf[512];
    std::snprintf(buf, sizeof buf, "%s,%s,%.17g,%s,%.17g,%.17g,%.17g\n", r.id.c_str(), field(r.sweep).c_str(),
                  r.constant, field(r.argmax_config).c_str(), r.stability.refine, r.stability.tile, r.stability.dilate);
    out += buf;
    return out;
}

}  // namespace ineqlab
