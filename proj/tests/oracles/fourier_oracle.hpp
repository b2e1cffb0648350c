#pragma once

// Test-only Fourier oracle: direct O(N^2) DFT, no FFT library.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "ineqlab/grid.hpp"

namespace oracle {

struct Mode {
    std::array<int, 3> k;
    std::complex<double> c;  // n^{-d} sum u e^{-2 pi i k.x/n}
};

inline std::vector<Mode> dft(const ineqlab::GridFunction& u) {
    const auto& s = u.spec();
    std::vector<Mode> out;
    for (std::size_t j = 0; j < u.size(); ++j) {
        auto k = u.coords(j);
        std::complex<double> acc = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            auto x = u.coords(i);
            double ph = 0.0;
            for (int a = 0; a < s.d; ++a) ph += static_cast<double>(k[a]) * x[a];
            acc += u[i] * std::polar(1.0, -2.0 * std::numbers::pi * ph / s.n);
        }
        out.push_back({k, acc / static_cast<double>(u.size())});
    }
    return out;
}

// Forward-difference symbol |sigma_k|^2 = sum_a (2/h)^2 sin^2(pi k_a/n).
inline double lattice_xi2(const std::array<int, 3>& k, const ineqlab::GridSpec& s) {
    double t = 0.0;
    for (int a = 0; a < s.d; ++a) {
        double sn = std::sin(std::numbers::pi * k[a] / s.n) * 2.0 / s.h();
        t += sn * sn;
    }
    return t;
}

// lambda^d sum_{k != 0} |sigma_k|^{2 s} |c_k|^2 with the lattice symbol.
inline double lattice_energy(const ineqlab::GridFunction& u, double s) {
    double e = 0.0;
    for (const auto& m : dft(u)) {
        double x2 = lattice_xi2(m.k, u.spec());
        if (x2 == 0.0) continue;
        e += std::pow(x2, s) * std::norm(m.c);
    }
    return e * u.spec().volume();
}

}  // namespace oracle
