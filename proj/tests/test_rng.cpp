#include <gtest/gtest.h>

#include <set>

#include "ineqlab/rng.hpp"

using namespace ineqlab;

// Reference vectors for Philox4x32-10.
TEST(Philox, KnownAnswers) {
    EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}), (Philox4x32{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
    EXPECT_EQ(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
              (Philox4x32{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
    EXPECT_EQ(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
              (Philox4x32{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(CounterRng, StreamContract) {
    // draw i of (seed, stream) is Philox at counter (i, stream) keyed by seed
    CounterRng r(0x0123456789abcdefULL, 5);
    r.next_u64();
    std::uint64_t x = r.next_u64();
    Philox4x32 out = philox4x32_10({1, 0, 5, 0}, {0x89abcdef, 0x01234567});
    EXPECT_EQ(x, (static_cast<std::uint64_t>(out[1]) << 32) | out[0]);
    EXPECT_EQ(r.position(), 2u);
}

TEST(CounterRng, DeterministicAndDistinctStreams) {
    CounterRng a(7, 0), b(7, 0), c(7, 1);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 100; ++i) {
        auto x = a.next_u64();
        EXPECT_EQ(x, b.next_u64());
        seen.insert(x);
        seen.insert(c.next_u64());
    }
    EXPECT_EQ(seen.size(), 200u);
}

TEST(CounterRng, UniformRanges) {
    CounterRng r(3, 0);
    double sum = 0.0;
    for (int i = 0; i < 20000; ++i) {
        double u = r.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
        int k = r.uniform_int(-2, 2);
        ASSERT_GE(k, -2);
        ASSERT_LE(k, 2);
    }
    EXPECT_NEAR(sum / 20000, 0.5, 0.01);
}
