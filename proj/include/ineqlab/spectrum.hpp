#pragma once

#include <complex>
#include <vector>

#include "ineqlab/grid.hpp"

namespace ineqlab {

// Fourier symbol used for |grad|. The lattice symbol is the exact multiplier
// of the forward difference: |sigma_k|^2 = sum_a (2/h)^2 sin^2(pi k_a / n).
enum class Symbol { continuous, lattice };

// Coefficients c_k = n^{-d} sum_x u_x exp(-2 pi i k.x / n), stored in FFT
// order per axis. c_0 is the mean and sum |u|^2 h^d = lambda^d sum |c_k|^2.
class SpectrumView {
public:
    static SpectrumView of(const GridFunction& u);

    const GridSpec& spec() const { return spec_; }
    const std::vector<std::complex<double>>& coeffs() const { return coeffs_; }
    std::complex<double> at(const Index3& k) const;

    // Signed wave number of FFT slot j on an axis with n slots, in [-n/2, n/2).
    static int wavenumber(int j, int n) { return j < (n + 1) / 2 ? j : j - n; }
    Index3 wavevector(std::size_t i) const;
    // |xi|^2 at slot i under the given symbol.
    double xi2(std::size_t i, Symbol sym) const;

    GridFunction to_grid() const;

    SpectrumView(GridSpec spec, std::vector<std::complex<double>> coeffs);

private:
    GridSpec spec_;
    std::vector<std::complex<double>> coeffs_;
};

// lambda^d sum_{k != 0} |xi_k|^{2s} |c_k|^2.
double multiplier_energy(const GridFunction& u, double s, Symbol sym);

// Periodic convolution of u with kernel k (kernel indexed by displacement,
// cell 0 is zero displacement). Result is sum_y k(y) u(x - y).
GridFunction convolve(const GridFunction& u, const GridFunction& kernel);

// Applies the multiplier |xi|^{2s} (k = 0 mode dropped) and returns the grid
// function. Requires mean zero for s < 0.
GridFunction apply_multiplier(const GridFunction& u, double s, Symbol sym);

}  // namespace ineqlab
