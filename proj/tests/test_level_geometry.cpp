#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ineqlab/error.hpp"
#include "ineqlab/families.hpp"
#include "ineqlab/level_geometry.hpp"
#include "ineqlab/norms.hpp"
#include "oracles/level_oracle.hpp"

using namespace ineqlab;

namespace {

const double kPi = std::numbers::pi;

GridFunction disc(const GridSpec& g, double cx, double cy, double r) {
    return GridFunction::sample(g, [&](const std::array<double, 3>& x) {
        double dx = x[0] - cx, dy = x[1] - cy;
        return dx * dx + dy * dy < r * r ? 1.0 : 0.0;
    });
}

GridFunction random_steps(int d, int n, std::uint64_t seed) {
    FamilySpec f;
    f.id = Family::random_steps;
    f.grid = {d, n, 1.0};
    f.seed = seed;
    return generate(f);
}

double positive_laplacian_mass(const GridFunction& phi) {
    auto lap = neg_laplacian(phi);
    double s = 0.0;
    for (double x : lap.values()) s += std::max(x, 0.0);
    return s * phi.spec().cell_volume();
}

const ClaimRow& claim(const GeomReport& g, const std::string& id) {
    for (const auto& c : g.claims)
        if (c.id == id) return c;
    throw std::runtime_error("missing claim " + id);
}

}  // namespace

TEST(LevelIndicator, Examples) {
    auto u = make({1, 4, 1.0}, {3, -1, -1, -1});
    EXPECT_EQ(level_indicator(u, 2).values, (std::vector<int>{1, 0, 0, 0}));
    EXPECT_EQ(level_indicator(u, 0.5).values, (std::vector<int>{1, -1, -1, -1}));
    auto pos = make({1, 4, 1.0}, {1, 2, 3, 4});
    EXPECT_EQ(level_indicator(pos, 0).values, (std::vector<int>{1, 1, 1, 1}));
    EXPECT_EQ(level_indicator(pos, 4).values, (std::vector<int>{0, 0, 0, 0}));
    EXPECT_THROW(level_indicator(pos, -1), PreconditionError);
}

TEST(Mollify, ConstantIsUnchanged) {
    GridSpec g{2, 32, 1.0};
    auto c = GridFunction::constant(g, 2.5);
    for (auto k : {MollifierKernel::smooth_bump(g, 0.2), MollifierKernel::hard_disc(g, 0.3)}) {
        auto m = mollify(c, k);
        for (double x : m.value.values()) EXPECT_NEAR(x, 2.5, 1e-13);
        EXPECT_NEAR(m.l1_change, 0.0, 1e-12);
    }
}

TEST(Mollify, KernelMassAndSymmetry) {
    GridSpec g{2, 64, 1.0};
    for (auto k : {MollifierKernel::smooth_bump(g, 0.125), MollifierKernel::hard_disc(g, 0.125)}) {
        double mass = 0.0;
        for (double x : k.weights.values()) {
            EXPECT_GE(x, 0.0);
            mass += x;
        }
        EXPECT_NEAR(mass, 1.0, 1e-10);
        auto flipped = shift(permute_axes(k.weights, {1, 0, 2}), {0, 0, 0});
        EXPECT_TRUE(same_values(flipped, k.weights));
    }
}

TEST(Mollify, HardDiscRampInOneDimension) {
    GridSpec g{1, 64, 1.0};
    std::vector<double> v(64, 0.0);
    for (int i = 16; i < 48; ++i) v[i] = 1.0;
    auto u = make(g, v);
    const double h = g.h();
    auto m = mollify(u, MollifierKernel::hard_disc(g, 4 * h));
    // averaging over 3 cells (|x| < 2h) turns each jump into a ramp
    EXPECT_NEAR(m.value[15], 1.0 / 3, 1e-14);
    EXPECT_NEAR(m.value[16], 2.0 / 3, 1e-14);
    EXPECT_NEAR(m.value[20], 1.0, 1e-14);
    EXPECT_NEAR(m.l1_change, 4 * h / 3, 1e-14);
    EXPECT_GE(m.slack, 0.0);
    EXPECT_NEAR(m.value.mean(), u.mean(), 1e-10);
}

TEST(Mollify, SlackNonnegativeOnRandomSteps) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto u = random_steps(2, 64, seed);
        for (double R : {4.0 / 64, 8.0 / 64}) {
            auto m1 = mollify(u, MollifierKernel::hard_disc(u.spec(), R));
            auto m2 = mollify(u, MollifierKernel::smooth_bump(u.spec(), R));
            EXPECT_GE(m1.slack, -1e-12);
            EXPECT_GE(m2.slack, -1e-12);
            EXPECT_NEAR(m2.value.mean(), u.mean(), 1e-10);
        }
    }
}

TEST(Mollify, RadiusOutOfRange) {
    GridSpec g{1, 16, 1.0};
    EXPECT_THROW(MollifierKernel::smooth_bump(g, 0.6), PreconditionError);
    EXPECT_THROW(MollifierKernel::smooth_bump(g, 0.0), PreconditionError);
    EXPECT_THROW(MollifierKernel::hard_disc(g, 1.5), PreconditionError);
}

TEST(BumpConstants, OneDimensionalClosedForm) {
    // in d = 1, ||psi'||_1 = 2 psi(0) = 2 e^{-1} / Z with Z = int_{-1}^1 exp(-1/(1-x^2))
    const int steps = 200000;
    double z = 0.0;
    for (int i = 0; i < steps; ++i) {
        double x = -1.0 + 2.0 * (i + 0.5) / steps;
        z += std::exp(-1.0 / (1.0 - x * x)) * 2.0 / steps;
    }
    EXPECT_NEAR(bump_reference_constants(1).grad_l1, 2.0 * std::exp(-1.0) / z, 1e-8);
}

TEST(BumpConstants, DiscreteKernelApproachesReference) {
    GridSpec g{2, 256, 1.0};
    auto k = MollifierKernel::smooth_bump(g, 48.0 / 256);
    auto m = measured_kernel_constants(k);
    // anisotropic discrete TV exceeds the isotropic continuum value by the
    // average of |cos| + |sin| over directions, 4/pi
    EXPECT_NEAR(m.grad_l1 / (k.grad_l1_ref * 4 / kPi), 1.0, 0.02);
    EXPECT_NEAR(m.lap_l1 / k.lap_l1_ref, 1.0, 0.02);
}

TEST(Coarea, MatchesOracleOnRandomSteps) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto u = random_steps(1 + seed % 2, 32, seed);
        auto r = coarea_check(u);
        EXPECT_TRUE(r.pass) << seed;
        EXPECT_LE(std::abs(r.level_sum - oracle::coarea_sum(u)), 1e-12 * r.tv) << seed;
    }
}

TEST(Coarea, TrivialCases) {
    auto c = GridFunction::constant({2, 8, 1.0}, 3.0);
    auto r = coarea_check(c);
    EXPECT_EQ(r.tv, 0.0);
    EXPECT_EQ(r.level_sum, 0.0);
    EXPECT_TRUE(r.pass);
    GridSpec g{2, 8, 1.0};
    std::vector<bool> mask(64, false);
    std::vector<double> v(64, 0.0);
    for (int i : {9, 10, 17, 18, 19}) v[i] = 1.0, mask[i] = true;
    auto b = coarea_check(make(g, v));
    EXPECT_EQ(b.levels, 1u);
    EXPECT_NEAR(b.level_sum, oracle::perimeter(make(g, v), mask), 1e-15);
}

TEST(DensitySet, Examples) {
    GridSpec g{2, 64, 1.0};
    const double R = 8 * g.h();
    auto all = density_set(GridFunction::constant(g, 1.0), R);
    EXPECT_EQ(std::count(all.begin(), all.end(), true), 64 * 64);
    auto none = density_set(GridFunction::constant(g, 0.0), R);
    EXPECT_EQ(std::count(none.begin(), none.end(), true), 0);
    auto d = disc(g, 0.5, 0.5, 3 * R);
    auto om = density_set(d, R);
    EXPECT_TRUE(om[d.index({32, 32, 0})]);
    EXPECT_FALSE(om[d.index({0, 0, 0})]);
    EXPECT_THROW(density_set(d, 1.5 * g.h()), PreconditionError);
    EXPECT_THROW(density_set(d * 0.5, R), PreconditionError);
}

TEST(DensitySet, HalfPlaneBoundaryByDirectCount) {
    // chi = left half; a ball of radius 2h holds 13 cells, centered one cell
    // right of the edge it sees 5 of them, centered on the last left cell 8
    GridSpec g{2, 16, 1.0};
    auto chi = GridFunction::sample(g, [](const std::array<double, 3>& x) { return x[0] < 0.5 ? 1.0 : 0.0; });
    auto om = density_set(chi, 4 * g.h());
    EXPECT_TRUE(om[chi.index({7, 3, 0})]);
    EXPECT_FALSE(om[chi.index({8, 3, 0})]);
}

TEST(Packing, Examples) {
    GridSpec g{2, 32, 1.0};
    std::vector<bool> empty(g.cells(), false);
    EXPECT_EQ(maximal_packing(g, empty, 0.25).count(), 0u);
    auto one = empty;
    one[100] = true;
    auto c = maximal_packing(g, one, 0.25);
    ASSERT_EQ(c.count(), 1u);
    EXPECT_EQ(c.centers[0], 100u);
    EXPECT_TRUE(c.covers);
}

TEST(Packing, DiscCountBoundAndSeparation) {
    GridSpec g{2, 256, 1.0};
    const double R = 8 * g.h();
    auto chi = disc(g, 0.4, 0.55, 4 * R);
    auto om = density_set(chi, R);
    auto c = maximal_packing(g, om, R);
    EXPECT_TRUE(c.covers);
    EXPECT_GE(c.min_separation, R);
    EXPECT_LE(c.count() * kPi / 4 * R * R, 2 * chi.integral() * 1.1);
    // centers are in the set and lexicographically first
    for (auto y : c.centers) EXPECT_TRUE(om[y]);
    std::size_t first = std::find(om.begin(), om.end(), true) - om.begin();
    EXPECT_EQ(c.centers[0], first);
}

TEST(Potential, CapacityProfileValues) {
    GridSpec g{2, 128, 1.0};
    const double h = g.h(), R = 8 * h, L = 32 * h;
    BallCover c;
    c.spec = g;
    c.radius = R;
    auto shape = GridFunction::constant(g, 0.0);
    c.centers = {shape.index({40, 50, 0})};
    auto p = capacity_potential(c, R, L).phi;
    EXPECT_EQ(p[p.index({48, 50, 0})], 1.0);
    EXPECT_NEAR(p[p.index({56, 50, 0})], 0.5, 1e-15);  // sqrt(RL) = 16h
    EXPECT_EQ(p[p.index({72, 50, 0})], 0.0);
    EXPECT_EQ(p[p.index({40, 90, 0})], 0.0);
    EXPECT_GE(p.min(), 0.0);
    EXPECT_LE(p.max(), 1.0);
    EXPECT_THROW(capacity_potential(c, R, R), PreconditionError);
    EXPECT_THROW(capacity_potential(c, R, 0.6), PreconditionError);
}

TEST(Potential, SingleCenterCapacityMass) {
    GridSpec g{2, 512, 1.0};
    const double h = g.h();
    auto shape = GridFunction::constant(g, 0.0);
    BallCover c;
    c.spec = g;
    c.centers = {shape.index({200, 300, 0})};
    for (double R : {8 * h, 12 * h})
        for (double L : {64 * h, 128 * h}) {
            auto p = capacity_potential(c, R, L).phi;
            EXPECT_NEAR(positive_laplacian_mass(p) / (2 * kPi / std::log(L / R)), 1.0, 0.05) << R << " " << L;
            EXPECT_NEAR(p.integral() / capacity_profile_mass(R, L), 1.0, 0.05);
        }
}

TEST(Potential, IndicatorDiscArea) {
    GridSpec g{2, 128, 1.0};
    const double R = 10 * g.h();
    BallCover c;
    c.spec = g;
    EXPECT_EQ(indicator_potential(c, R).phi.max_abs(), 0.0);
    c.centers = {77};
    auto p = indicator_potential(c, R).phi;
    EXPECT_NEAR(p.integral() / (kPi * R * R), 1.0, 0.05);
    c.centers = {77, 77 + 128 * 5};
    EXPECT_LE(indicator_potential(c, R).phi.integral(), 2 * kPi * R * R * 1.05);
}

TEST(GeomClaims, ZeroFunction) {
    auto g = verify_geom_claims(GridFunction::constant({2, 64, 1.0}, 0.0), 8.0 / 64, 0.25);
    EXPECT_TRUE(g.pass);
    for (const auto& c : g.claims) {
        EXPECT_EQ(c.lhs, 0.0) << c.id;
        EXPECT_EQ(c.ratio, 0.0) << c.id;
    }
}

TEST(GeomClaims, DiscAtHighResolution) {
    GridSpec g{2, 512, 1.0};
    const double R = 8 * g.h(), L = 16 * R;
    auto chi = disc(g, 0.5, 0.5, 4 * R);
    auto r = verify_geom_claims(chi, R, L);
    for (const auto& c : r.claims) EXPECT_TRUE(c.pass) << c.id << " " << c.lhs << " " << c.rhs;
    EXPECT_LE(claim(r, "claim1").ratio, 1.1);
    EXPECT_NEAR(claim(r, "eq2a-identity").ratio, 1.0, 1e-9);
}

TEST(GeomClaims, TwoDiscsAndGeneralDimension) {
    GridSpec g{2, 256, 1.0};
    const double R = 8 * g.h();
    auto chi = disc(g, 0.25, 0.25, 2 * R) + disc(g, 0.7, 0.75, 3 * R);
    auto r = verify_geom_claims(chi, R, 0.25);
    EXPECT_TRUE(r.pass);
    auto csv = claims_csv(r.claims);
    EXPECT_EQ(csv.rfind("claim_id,lhs,rhs,ratio,pass\n", 0), 0u);
    EXPECT_EQ(cover_csv(r.cover).rfind("i,y_x,y_y,R\n0,", 0), 0u);

    GridSpec g1{1, 256, 1.0};
    auto seg = GridFunction::sample(g1, [](const std::array<double, 3>& x) { return x[0] > 0.3 && x[0] < 0.5; });
    auto r1 = verify_geom_claims(seg, 8 * g1.h(), 0.0);
    EXPECT_TRUE(r1.pass);
    EXPECT_EQ(r1.potential.kind, PotentialKind::indicator);
}

TEST(GeomClaims, RandomBinaryFieldsClaimOne) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        FamilySpec f;
        f.id = Family::ball_lattice;
        f.grid = {2, 128, 1.0};
        f.seed = seed;
        f.params = {{"phi", 0.1}, {"per_axis", 2}, {"jitter", 0.5}};
        auto chi = generate(f);
        auto r = verify_geom_claims(chi, 8 * f.grid.h(), 0.25);
        EXPECT_TRUE(claim(r, "claim1-split").pass);
        EXPECT_TRUE(claim(r, "claim1-mollify").pass);
        EXPECT_TRUE(claim(r, "claim1").pass);
        EXPECT_TRUE(claim(r, "claim2-cover").pass);
        EXPECT_TRUE(claim(r, "eq4").pass);
    }
}
