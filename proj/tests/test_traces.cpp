#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ineqlab/error.hpp"
#include "ineqlab/families.hpp"
#include "ineqlab/inequalities.hpp"
#include "ineqlab/norms.hpp"
#include "oracles/level_oracle.hpp"

using namespace ineqlab;

namespace {

GridFunction family(Family id, int d, int n, std::uint64_t seed, std::map<std::string, double> params = {}) {
    FamilySpec f;
    f.id = id;
    f.grid = {d, n, 1.0};
    f.seed = seed;
    f.params = std::move(params);
    return generate(f);
}

const TraceStep& step(const InequalityReport& r, const std::string& id) {
    for (const auto& s : r.steps)
        if (s.step == id) return s;
    throw std::runtime_error("missing step " + id);
}

double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

void expect_all_steps_pass(const InequalityReport& r) {
    for (const auto& s : r.steps) EXPECT_TRUE(s.pass) << s.step << " lhs " << s.lhs << " rhs " << s.rhs;
    EXPECT_TRUE(r.pass);
}

}  // namespace

TEST(Ledoux, ZeroFunction) {
    auto r = ledoux_trace(GridFunction::constant({2, 16, 1.0}, 0.0), 4.0);
    EXPECT_EQ(r.lhs, 0.0);
    EXPECT_EQ(r.rhs, 0.0);
    for (const auto& s : r.steps) {
        EXPECT_EQ(s.lhs, 0.0);
        EXPECT_EQ(s.rhs, 0.0);
    }
    EXPECT_TRUE(r.pass);
}

TEST(Ledoux, LayerCakeIdentitiesAgainstOracle) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        auto u = prepare_input(IneqId::prop1, family(Family::random_steps, 2, 32, seed));
        const double M = 8.0;
        auto r = ledoux_trace(u, M);
        EXPECT_LT(rel(step(r, "layer-cake").lhs, oracle::layer_cake_lhs(u, 1.0)), 1e-12);
        EXPECT_LT(rel(step(r, "truncation-layer").lhs, oracle::layer_cake_lhs(u, M)), 1e-12);
        EXPECT_LT(rel(step(r, "layer-cake").lhs, step(r, "layer-cake").rhs), 1e-12);
        EXPECT_LT(rel(step(r, "truncation-layer").lhs, step(r, "truncation-layer").rhs), 1e-12);
        EXPECT_LT(rel(step(r, "coarea").lhs, oracle::coarea_sum(u)), 1e-12);
    }
}

TEST(Ledoux, EveryStepHolds) {
    for (int d : {1, 2}) {
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            auto u = prepare_input(IneqId::prop1, family(Family::random_steps, d, d == 1 ? 128 : 32, seed));
            auto r = ledoux_trace(u, 4.0);
            expect_all_steps_pass(r);
            EXPECT_GT(r.terms["kernel_lap_l1"], 0.0);
        }
    }
    EXPECT_THROW(ledoux_trace(GridFunction::constant({1, 8, 1.0}, 0.0), 1.0), PreconditionError);
}

TEST(Prop2Trace, EmptyBelowM) {
    auto u = make({2, 4, 1.0}, std::vector<double>(16, 0.0));
    auto r = prop2_trace(u, std::numbers::e);
    EXPECT_TRUE(r.steps.size() == 1);  // only the tail step, 0 <= 0
    EXPECT_EQ(r.lhs, 0.0);
}

TEST(Prop2Trace, OstwaldChainHolds) {
    auto u = prepare_input(IneqId::prop2, family(Family::ostwald, 2, 256, 0, {{"phi", 1.0 / 16}}));
    TraceOptions opt;
    opt.mu_count = 4;
    auto r = prop2_trace(u, std::numbers::e, opt);
    EXPECT_GT(r.steps.size(), 10u);
    expect_all_steps_pass(r);
}

TEST(Prop2Trace, TailAgainstQuadrature) {
    std::vector<double> v(64, -1.0);
    v[0] = 20.0;
    v[1] = 20.0;
    v[9] = 7.0;
    v[10] = 3.5;
    GridFunction u = make({2, 8, 1.0}, v);
    u = u - u.mean();
    u = prepare_input(IneqId::prop2, u);
    const double M = 3.0;
    TraceOptions opt;
    opt.mu_count = 2;
    auto r = prop2_trace(u, M, opt);
    // composite Simpson on [M, x] with 20000 panels
    auto G = [&](double x) {
        if (x <= M) return 0.0;
        const int n = 20000;
        const double h = (x - M) / n;
        double s = 0.0;
        for (int i = 0; i <= n; ++i) {
            const double mu = M + i * h;
            const double w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
            s += w * std::cbrt(mu * std::log(mu));
        }
        return s * h / 3.0;
    };
    double T = 0.0, W = 0.0;
    for (double x : u.values()) {
        T += G(x) / 64.0;
        if (x > 2 * M) W += std::pow(x, 4.0 / 3.0) * std::cbrt(std::log(x)) / 64.0;
    }
    EXPECT_LT(rel(step(r, "tail").rhs, T), 1e-10);
    const double c = std::pow(2.0, -4.0 / 3.0) * std::cbrt(1.0 / (1.0 + std::log(2.0)));
    EXPECT_LT(rel(step(r, "tail").lhs, c * W), 1e-12);
    EXPECT_TRUE(step(r, "tail").pass);
}

TEST(Prop3Trace, ConstantField) {
    auto r = prop3_trace(GridFunction::constant({2, 16, 1.0}, 1.0), 1.0);
    EXPECT_EQ(r.terms["w2"], 0.0);
    EXPECT_EQ(r.lhs, 0.0);
    EXPECT_TRUE(r.pass);
}

TEST(Prop3Trace, StepFieldChainHolds) {
    for (int d : {1, 2}) {
        auto u = prepare_input(IneqId::prop3, family(Family::random_steps, d, d == 1 ? 128 : 32, 3, {{"levels", 4}}));
        auto r = prop3_trace(u, 0.8);
        expect_all_steps_pass(r);
        EXPECT_LE(step(r, "claimA-lower").lhs, step(r, "claimA-lower").rhs);
        EXPECT_LE(step(r, "claimB").lhs, step(r, "claimB").rhs);
        const double p = 2.0 / (3.0 * d);
        EXPECT_DOUBLE_EQ(step(r, "claimB").rhs, std::pow(2.0, p) / (std::pow(2.0, p) - 1.0));
        EXPECT_DOUBLE_EQ(r.terms["eps_absorb"], std::pow(2.0 * r.terms["C_tilde"], -1.0 / d));
    }
}

TEST(Prop5Trace, RescalingIdentityExact) {
    auto u = prepare_input(IneqId::prop5, family(Family::random_steps, 2, 16, 1)) * 0.05;
    auto v = prepare_input(IneqId::prop5, family(Family::random_steps, 2, 16, 2)) * 0.05;
    auto r = prop5_trace(u, v, 0.5, 2.0);
    for (const char* id : {"rescale-tv", "rescale-w2", "rescale-h", "rescale-lhs", "rescale-rhs"}) {
        const auto& s = step(r, id);
        EXPECT_LE(std::abs(s.lhs - s.rhs), 1e-9 * std::max(std::abs(s.lhs), std::abs(s.rhs))) << id;
    }
    EXPECT_DOUBLE_EQ(r.terms["M"], std::pow(0.5, -7.0 / 9.0));
    EXPECT_DOUBLE_EQ(r.terms["ell"], std::pow(r.terms["M"], -2.0 / 7.0));
}

TEST(Prop5Trace, ConstantAndConstraint) {
    auto c = GridFunction::constant({2, 8, 1.0}, 0.1);
    auto r = prop5_trace(c, c, 1.0, 2.0);
    EXPECT_EQ(r.lhs, 0.0);
    EXPECT_EQ(r.rhs, 0.0);
    EXPECT_TRUE(r.pass);
    try {
        prop5_trace(c, c, 1.0, 10.0);
        FAIL();
    } catch (const PreconditionError& e) {
        EXPECT_NE(std::string(e.what()).find("Phi"), std::string::npos);
    }
}

TEST(TraceCsv, Header) {
    auto r = ledoux_trace(GridFunction::constant({1, 8, 1.0}, 0.0), 2.0);
    EXPECT_EQ(trace_csv(r).substr(0, 23), "id,step,lhs,rhs,slack\nl");
}
