#include <gtest/gtest.h>

#include <chrono>
#include <cmath>

#include "ineqlab/error.hpp"
#include "ineqlab/families.hpp"
#include "ineqlab/fixtures.hpp"
#include "ineqlab/scaling.hpp"

using namespace ineqlab;

namespace {

GridFunction steps(int d, int n, std::uint64_t seed, double lambda = 1.0) {
    FamilySpec f;
    f.id = Family::random_steps;
    f.grid = {d, n, lambda};
    f.seed = seed;
    return generate(f);
}

GridFunction checkerboard(int n, int block) {
    const GridSpec g{2, n, 1.0};
    return GridFunction::sample(g, [&](const std::array<double, 3>& x) {
        const int i = static_cast<int>(x[0] / g.h()) / block, j = static_cast<int>(x[1] / g.h()) / block;
        return (i + j) % 2 == 0 ? 1.0 : -1.0;
    });
}

}  // namespace

TEST(Homogeneity, TvFactorSix) {
    auto r = homogeneity_check("tv", steps(2, 16, 1), 2.0, 3.0);
    EXPECT_EQ(r.predicted, 6.0);
    EXPECT_EQ(r.measured, 6.0);
    EXPECT_TRUE(r.pass);
}

TEST(Homogeneity, W2FactorSixteen) {
    auto u = prepare_input(IneqId::prop3, steps(2, 8, 2));
    auto v = prepare_input(IneqId::prop3, steps(2, 8, 3));
    auto r = homogeneity_check("w2", u, 2.0, 1.0, &v);
    EXPECT_EQ(r.predicted, 16.0);
    EXPECT_NEAR(r.measured, 16.0, 16.0 * 1e-8);
    for (double M : {1.0, 3.0}) EXPECT_TRUE(homogeneity_check("w2", u, 2.0, M, &v).pass);
    EXPECT_THROW(homogeneity_check("w2", u, 2.0, 1.0), PreconditionError);
}

TEST(Homogeneity, IdentityTransform) {
    auto u = steps(2, 16, 4);
    for (const char* f : {"lp:4/3", "tv", "spectral:-1", "weak:2"}) {
        auto r = homogeneity_check(f, u - u.mean(), 1.0, 1.0);
        EXPECT_EQ(r.measured, 1.0) << f;
    }
}

TEST(Homogeneity, PredictedExponents) {
    auto u = steps(2, 16, 5);
    u = u - u.mean();
    for (double ell : {2.0, 4.0}) {
        auto lp = homogeneity_check("lp:4/3", u, ell, 3.0);
        EXPECT_DOUBLE_EQ(lp.a, 1.5);
        EXPECT_TRUE(lp.pass) << lp.deviation;
        auto weak = homogeneity_check("weak:3/2", u, ell, 0.5);
        EXPECT_DOUBLE_EQ(weak.a, 2.0 / 1.5);
        EXPECT_TRUE(weak.pass) << weak.deviation;
        auto sp = homogeneity_check("spectral:-1", u, ell, 3.0);
        EXPECT_DOUBLE_EQ(sp.a, 2.0);
        EXPECT_LE(sp.deviation, 1e-9);
        auto half = homogeneity_check("spectral:-1/2", u, ell, 1.0);
        EXPECT_DOUBLE_EQ(half.a, 1.5);
        EXPECT_TRUE(half.pass);
    }
    auto u1 = steps(1, 64, 6);
    EXPECT_DOUBLE_EQ(homogeneity_check("tv", u1, 2.0, 2.0).a, 0.0);
    EXPECT_TRUE(homogeneity_check("tv", u1, 2.0, 2.0).pass);
}

TEST(Homogeneity, UnknownFunctional) {
    auto u = steps(1, 8, 0);
    EXPECT_THROW(homogeneity_check("h1", u, 2.0, 1.0), PreconditionError);
    EXPECT_THROW(homogeneity_check("lp", u, 2.0, 1.0), PreconditionError);
    EXPECT_THROW(homogeneity_check("lp:x", u, 2.0, 1.0), PreconditionError);
}

TEST(Extensivity, Prop1PartsPerVolume) {
    auto u = prepare_input(IneqId::prop1, steps(2, 16, 7));
    for (int k : {2, 3}) {
        auto rows = extensivity_check(IneqId::prop1, u, k);
        ASSERT_EQ(rows.size(), 3u);
        for (const auto& r : rows) EXPECT_TRUE(r.pass) << r.functional << " " << r.deviation;
        EXPECT_LE(rows[2].deviation, 1e-9);
    }
    EXPECT_THROW(extensivity_check(IneqId::prop1, u, 4), PreconditionError);
}

TEST(Extensivity, W2ToUniformPerVolume) {
    auto u = prepare_input(IneqId::prop3, steps(2, 8, 8));
    auto rows = extensivity_check(IneqId::prop3, u, 2);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[2].functional, "w2_to_uniform");
    EXPECT_LE(rows[2].deviation, 0.01);
    for (const auto& r : rows) EXPECT_TRUE(r.pass) << r.functional;
}

TEST(Coarsening, CheckerboardAboveFixture) {
    const double c = load_fixtures().constant("coarsening");
    for (int block : {1, 2, 4, 8}) {
        auto r = coarsening_bound(checkerboard(32, block), c);
        EXPECT_GT(r.product, 0.0);
        EXPECT_DOUBLE_EQ(r.l43_squared, 1.0);
        EXPECT_TRUE(r.pass) << "block " << block << " ratio " << r.ratio;
    }
}

TEST(Coarsening, Errors) {
    EXPECT_THROW(coarsening_bound(GridFunction::constant({2, 8, 1.0}, 1.0), 0.5), PreconditionError);
    EXPECT_THROW(coarsening_bound(GridFunction::constant({2, 8, 1.0}, 0.5), 0.5), PreconditionError);
}

TEST(Coarsening, TileInvariantRatio) {
    auto u = checkerboard(16, 4);
    auto a = coarsening_bound(u, 0.0), b = coarsening_bound(tile(u, 2), 0.0);
    EXPECT_NEAR(a.ratio, b.ratio, 1e-12 * a.ratio);
}

TEST(RegimeExponents, ExactRationals) {
    const auto t0 = std::chrono::steady_clock::now();
    auto rows = regime_exponents();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    EXPECT_LT(secs, 0.1);
    std::map<std::string, std::string> by;
    for (const auto& r : rows) {
        EXPECT_TRUE(r.pass) << r.name << " = " << r.value << " expected " << r.expected;
        by[r.name] = r.value;
    }
    EXPECT_EQ(by["threshold exponent (3d+1)/(3d+3)"], "7/9");
    EXPECT_EQ(by["lhs power (3d+3)/(3d+1)"], "9/7");
    EXPECT_EQ(by["regime3 lhs nu exponent"], "-2/7");
    EXPECT_EQ(by["prop3 exponent (2+3d)/(3d)"], "4/3");
    EXPECT_EQ(by["regime2 Phi exponent"], "2/3");
    EXPECT_EQ(by["nondim length"], "(1/3; 2/3)");
    EXPECT_EQ(exponents_csv(rows).substr(0, 26), "name,value,expected,pass\nt");
}

TEST(ParseNumber, Fractions) {
    EXPECT_DOUBLE_EQ(parse_number("4/3"), 4.0 / 3.0);
    EXPECT_EQ(parse_number("-1"), -1.0);
    EXPECT_TRUE(std::isinf(parse_number("inf")));
    EXPECT_THROW(parse_number("1/0"), PreconditionError);
    EXPECT_THROW(parse_number("2x"), PreconditionError);
}
