#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "ineqlab/calibration.hpp"
#include "ineqlab/error.hpp"
#include "ineqlab/families.hpp"

using namespace ineqlab;

namespace {

Instance instance(IneqId id, Family fam, int d, int n, std::uint64_t seed, std::map<std::string, double> params = {}) {
    FamilySpec f;
    f.id = fam;
    f.grid = {d, n, 1.0};
    f.seed = seed;
    f.params = std::move(params);
    Instance in;
    in.family = family_name(fam);
    in.seed = seed;
    in.u = prepare_input(id, generate(f));
    return in;
}

}  // namespace

TEST(Calibrate, ConstantsOnlySweep) {
    std::vector<Instance> sweep;
    for (int i = 0; i < 12; ++i) {
        Instance in;
        in.family = "constant";
        in.seed = i;
        in.u = GridFunction::constant({2, 8, 1.0}, 0.0);
        sweep.push_back(in);
    }
    auto r = calibrate(IneqId::prop1, sweep);
    EXPECT_EQ(r.constant, 0.0);
    for (double x : r.ratios) EXPECT_EQ(x, 0.0);
}

TEST(Calibrate, ConstantIsMaxOfReportedRatios) {
    std::vector<Instance> sweep;
    for (std::uint64_t s = 0; s < 50; ++s) sweep.push_back(instance(IneqId::prop1, Family::random_steps, 1, 128, s));
    auto r = calibrate(IneqId::prop1, sweep);
    ASSERT_EQ(r.ratios.size(), 50u);
    double m = 0.0;
    for (std::size_t i = 0; i < sweep.size(); ++i) {
        const double ratio = check(IneqId::prop1, sweep[i].u).ratio;
        EXPECT_EQ(ratio, r.ratios[i]);
        m = std::max(m, ratio);
    }
    EXPECT_EQ(r.constant, m);
    EXPECT_EQ(r.ratios[r.argmax], m);
    EXPECT_LT(r.stability.tile, 1e-12);  // FFT rounding differs between n and 2n
    EXPECT_LT(r.stability.refine, 0.02);
}

TEST(Calibrate, GnQuadraticBelowOne) {
    std::vector<Instance> sweep;
    for (std::uint64_t s = 0; s < 20; ++s) sweep.push_back(instance(IneqId::gn, Family::random_fourier, 2, 16, s));
    CheckParams p;
    p.q = 2.0;
    auto r = calibrate(IneqId::gn, sweep, p);
    EXPECT_LE(r.constant, 1.0 + 1e-9);
    EXPECT_GT(r.constant, 0.0);
}

TEST(Calibrate, Errors) {
    EXPECT_THROW(calibrate(IneqId::prop1, {}), PreconditionError);
    std::vector<Instance> few(3, instance(IneqId::prop1, Family::random_steps, 1, 16, 0));
    EXPECT_THROW(calibrate(IneqId::prop1, few), PreconditionError);
}

TEST(Calibrate, Prop3BisectionMinimalCommonConstant) {
    std::vector<Instance> sweep;
    for (std::uint64_t s = 0; s < 10; ++s)
        sweep.push_back(instance(IneqId::prop3, Family::random_steps, 1, 64, s, {{"levels", 4}}));
    auto r = calibrate(IneqId::prop3, sweep);
    const double C = r.constant;
    // C passes the sweep, C - tol does not
    auto worst = [&](double T) {
        double w = 0.0;
        for (const auto& in : sweep) {
            CheckParams p;
            p.threshold = T;
            w = std::max(w, check(IneqId::prop3, in.u, p).ratio);
        }
        return w;
    };
    EXPECT_LE(worst(C), C * (1 + 1e-12));
    EXPECT_GT(worst(C - kBisectionTol), C - kBisectionTol);
    for (double x : r.ratios) EXPECT_LE(x, C);
    ASSERT_EQ(r.relaxation.size(), 5u);
    EXPECT_EQ(r.relaxation.back().first, C);
    EXPECT_NEAR(r.relaxation.back().second, worst(C), 1e-12 * C);
    // prefactor is nonincreasing in the threshold
    for (std::size_t i = 1; i + 1 < r.relaxation.size(); ++i)
        EXPECT_LE(r.relaxation[i].second, r.relaxation[i - 1].second);
}

TEST(Extremize, StripeBeatsGridScan) {
    const GridSpec g{1, 128, 1.0};
    auto fam = param_family("stripe-width", g);
    auto r = extremize(IneqId::prop1, fam, 120, 7);
    for (int i = 0; i < 32; ++i) {
        const double w = fam.lo[0] + (fam.hi[0] - fam.lo[0]) * i / 31.0;
        const double scan = check(IneqId::prop1, prepare_input(IneqId::prop1, fam.make({w}))).ratio;
        EXPECT_GE(r.constant, scan) << "w = " << w;
    }
    ASSERT_EQ(r.best_params.size(), 1u);
    EXPECT_EQ(r.trace.back(), r.constant);
    EXPECT_TRUE(std::is_sorted(r.trace.begin(), r.trace.end()));
}

TEST(Extremize, ZeroBudgetReturnsBestStart) {
    auto fam = param_family("stripe-width", {1, 64, 1.0});
    auto r = extremize(IneqId::prop1, fam, 0, 3, 6);
    ASSERT_EQ(r.ratios.size(), 6u);
    EXPECT_EQ(r.constant, *std::max_element(r.ratios.begin(), r.ratios.end()));
    EXPECT_THROW(extremize(IneqId::prop1, fam, -1, 3), PreconditionError);
}

TEST(Extremize, Deterministic) {
    auto fam = param_family("two-stripe", {1, 64, 1.0});
    auto a = extremize(IneqId::prop1, fam, 40, 11, 4);
    auto b = extremize(IneqId::prop1, fam, 40, 11, 4);
    EXPECT_EQ(a.ratios, b.ratios);
    EXPECT_EQ(a.best_params, b.best_params);
    EXPECT_EQ(calibration_csv(a), calibration_csv(b));
    auto c = extremize(IneqId::prop1, fam, 40, 12, 4);
    EXPECT_NE(a.ratios, c.ratios);
}

TEST(ParamFamily, ContinuousCoverage) {
    auto fam = param_family("stripe-width", {1, 10, 1.0});
    auto u = fam.make({0.25});
    EXPECT_DOUBLE_EQ(u.integral(), 0.25);
    EXPECT_DOUBLE_EQ(u[2], 0.5);
    EXPECT_THROW(param_family("nope", {1, 10, 1.0}), PreconditionError);
}
