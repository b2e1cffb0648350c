#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ineqlab/error.hpp"
#include "ineqlab/families.hpp"
#include "ineqlab/grid.hpp"
#include "ineqlab/norms.hpp"
#include "ineqlab/spectrum.hpp"

using namespace ineqlab;

namespace {

FamilySpec steps(int d, int n, std::uint64_t seed) {
    FamilySpec f;
    f.id = Family::random_steps;
    f.grid = {d, n, 1.0};
    f.seed = seed;
    return f;
}

double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

}  // namespace

TEST(Make, ZeroFunctionHasMeanZero) {
    auto u = make({1, 4, 1.0}, {0, 0, 0, 0});
    EXPECT_EQ(u.mean(), 0.0);
}

TEST(Make, ConstantMean) {
    auto u = make({2, 2, 2.0}, {1, 1, 1, 1});
    EXPECT_EQ(u.mean(), 1.0);
    EXPECT_EQ(u.integral(), 4.0);
}

TEST(Make, MeanOfDirectSum) {
    auto u = make({1, 4, 1.0}, {3, -1, -1, -1});
    EXPECT_EQ(u.mean(), 0.0);
}

TEST(Make, RejectsBadInput) {
    EXPECT_THROW(make({1, 4, 1.0}, {1, 2, 3}), PreconditionError);
    EXPECT_THROW(make({1, 2, 1.0}, {1, NAN}), PreconditionError);
    EXPECT_THROW(make({4, 2, 1.0}, std::vector<double>(16, 0.0)), PreconditionError);
    EXPECT_THROW(make({1, 2, -1.0}, {1, 2}), PreconditionError);
}

TEST(Tile, IdentityForOne) {
    auto u = generate(steps(2, 16, 3));
    EXPECT_TRUE(same_values(tile(u, 1), u));
}

TEST(Tile, RepeatsHalfIndicator) {
    auto u = make({1, 4, 1.0}, {1, 1, 0, 0});
    auto t = tile(u, 2);
    EXPECT_EQ(t.values(), (std::vector<double>{1, 1, 0, 0, 1, 1, 0, 0}));
    EXPECT_DOUBLE_EQ(t.spec().lambda, 2.0);
    EXPECT_EQ(t.mean(), u.mean());
    EXPECT_THROW(tile(u, 0), PreconditionError);
}

TEST(Tile, TvPerVolumeUnchanged) {
    for (int d = 1; d <= 3; ++d) {
        auto u = generate(steps(d, 8, 11));
        auto t = tile(u, 2);
        EXPECT_EQ(tv_norm(t) / t.spec().volume(), tv_norm(u) / u.spec().volume()) << "d=" << d;
    }
}

TEST(Dilate, IdentityAndScaling) {
    auto u = generate(steps(2, 16, 5));
    EXPECT_TRUE(same_values(dilate(u, 1, 1), u));
    auto v = dilate(u, 2, 1);
    EXPECT_EQ(tv_norm(v), 2.0 * tv_norm(u));
    for (int d = 1; d <= 3; ++d) {
        auto w = generate(steps(d, 8, 9));
        EXPECT_EQ(tv_norm(dilate(w, 2, 1)), std::pow(2.0, d - 1) * tv_norm(w));
    }
    EXPECT_NEAR(lp_norm(dilate(u, 1, 3), 2.5), 3.0 * lp_norm(u, 2.5), 1e-14 * lp_norm(u, 2.5));
    EXPECT_THROW(dilate(u, 0.0, 1.0), PreconditionError);
}

TEST(Refine, PreservesQuadratureNorms) {
    auto u = generate(steps(2, 16, 7));
    EXPECT_TRUE(same_values(refine(u, 1), u));
    EXPECT_EQ(lp_norm(refine(u, 4), 4.0 / 3.0), lp_norm(u, 4.0 / 3.0));
    EXPECT_EQ(tv_norm(refine(u, 2)), tv_norm(u));
    EXPECT_EQ(refine(u, 2).integral(), u.integral());
    EXPECT_THROW(refine(u, 0), PreconditionError);
}

TEST(Shift, AndPermutationRoundTrip) {
    auto u = generate(steps(3, 6, 2));
    auto s = shift(shift(u, {1, 2, 3}), {-1, -2, -3});
    EXPECT_TRUE(same_values(s, u));
    auto p = permute_axes(permute_axes(u, {1, 2, 0}), {2, 0, 1});
    EXPECT_TRUE(same_values(p, u));
}

TEST(Generate, Deterministic) {
    for (Family f : {Family::random_fourier, Family::random_steps, Family::single_bump}) {
        FamilySpec s = steps(2, 32, 7);
        s.id = f;
        EXPECT_TRUE(same_values(generate(s), generate(s))) << family_name(f);
    }
    FamilySpec a = steps(2, 32, 7), b = steps(2, 32, 8);
    EXPECT_FALSE(same_values(generate(a), generate(b)));
}

TEST(Generate, OstwaldQuarter) {
    FamilySpec f;
    f.id = Family::ostwald;
    f.grid = {2, 64, 1.0};
    f.params = {{"phi", 0.25}};
    auto u = generate(f);
    EXPECT_NEAR(u.mean(), 0.0, 1e-12);
    EXPECT_EQ(u.min(), -1.0);
    f.params = {{"phi", 0.25}, {"per_axis", 4}, {"jitter", 0.5}};
    u = generate(f);
    EXPECT_NEAR(u.mean(), 0.0, 1e-12);
    EXPECT_EQ(u.min(), -1.0);
    f.params = {{"phi", 1.5}};
    EXPECT_THROW(generate(f), PreconditionError);
}

TEST(Generate, StripeFractions) {
    FamilySpec f;
    f.id = Family::stripe;
    f.grid = {2, 16, 1.0};
    f.params = {{"a", 2.0}, {"b", -1.0}};
    auto u = generate(f);
    int na = 0;
    for (double x : u.values()) {
        EXPECT_TRUE(x == 2.0 || x == -1.0);
        na += x == 2.0;
    }
    EXPECT_EQ(na, 16 * 8);
}

TEST(Generate, BranchingStripesNeedsTwoDims) {
    FamilySpec f;
    f.id = Family::branching_stripes;
    f.grid = {1, 16, 1.0};
    EXPECT_THROW(generate(f), PreconditionError);
    f.grid = {2, 32, 1.0};
    auto u = generate(f);
    EXPECT_NEAR(u.mean(), 0.0, 1e-15);
    EXPECT_EQ(u.max_abs(), 1.0);
}

TEST(Generate, UnknownFamilyName) { EXPECT_THROW(parse_family("spiral"), PreconditionError); }

TEST(Spectrum, RoundTripAndParseval) {
    for (int d = 1; d <= 3; ++d) {
        FamilySpec f = steps(d, d == 3 ? 8 : 32, 13);
        f.id = Family::random_fourier;
        f.grid.lambda = 2.5;
        auto u = generate(f) + 0.75;
        auto sp = SpectrumView::of(u);
        auto back = sp.to_grid();
        double err = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) err = std::max(err, std::abs(back[i] - u[i]));
        EXPECT_LE(err, 1e-12 * u.max_abs());
        EXPECT_NEAR(sp.coeffs()[0].real(), u.mean(), 1e-14);
        double lhs = 0.0, rhs = 0.0;
        for (double x : u.values()) lhs += x * x;
        lhs *= u.spec().cell_volume();
        for (auto c : sp.coeffs()) rhs += std::norm(c);
        rhs *= u.spec().volume();
        EXPECT_LE(rel(lhs, rhs), 1e-12);
    }
}

TEST(Spectrum, WavenumberRange) {
    EXPECT_EQ(SpectrumView::wavenumber(0, 8), 0);
    EXPECT_EQ(SpectrumView::wavenumber(3, 8), 3);
    EXPECT_EQ(SpectrumView::wavenumber(4, 8), -4);
    EXPECT_EQ(SpectrumView::wavenumber(7, 8), -1);
}

TEST(Spectrum, LatticeSymbolMatchesForwardDifference) {
    FamilySpec f = steps(2, 16, 4);
    auto u = generate(f);
    u = u - u.mean();
    double direct = std::pow(grad_q_norm(u, 2.0), 2);
    double spectral = std::pow(spectral_norm(u, 1.0, Symbol::lattice), 2);
    EXPECT_LE(rel(direct, spectral), 1e-12);
}

TEST(Spectrum, ConvolutionWithDeltaIsIdentity) {
    auto u = generate(steps(2, 16, 21));
    std::vector<double> k(u.size(), 0.0);
    k[0] = 1.0;
    auto c = convolve(u, make(u.spec(), k));
    for (std::size_t i = 0; i < u.size(); ++i) EXPECT_NEAR(c[i], u[i], 1e-12);
}
