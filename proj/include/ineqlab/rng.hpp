#pragma once

#include <array>
#include <cstdint>

namespace ineqlab {

// Philox4x32-10 counter-based generator.
using Philox4x32 = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

Philox4x32 philox4x32_10(Philox4x32 ctr, PhiloxKey key);

// Stream of draws keyed by (seed, stream). Draw i uses counter (i, stream).
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

    std::uint64_t next_u64();
    double uniform();                          // [0, 1)
    double uniform(double lo, double hi);      // [lo, hi)
    int uniform_int(int lo, int hi);           // inclusive
    double normal();

    std::uint64_t position() const { return counter_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
};

}  // namespace ineqlab
