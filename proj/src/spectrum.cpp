#include "ineqlab/spectrum.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

#include "ineqlab/error.hpp"
#include "ineqlab/exact_sum.hpp"

namespace ineqlab {
namespace {

std::mutex planner_mutex;

// Unnormalized transform; sign = FFTW_FORWARD or FFTW_BACKWARD.
std::vector<std::complex<double>> fft(const GridSpec& s, std::vector<std::complex<double>> in, int sign) {
    std::vector<std::complex<double>> out(in.size());
    int dims[3] = {s.n, s.n, s.n};
    fftw_plan p;
    {
        std::lock_guard<std::mutex> lock(planner_mutex);
        p = fftw_plan_dft(s.d, dims, reinterpret_cast<fftw_complex*>(in.data()),
                          reinterpret_cast<fftw_complex*>(out.data()), sign, FFTW_ESTIMATE);
    }
    fftw_execute(p);
    {
        std::lock_guard<std::mutex> lock(planner_mutex);
        fftw_destroy_plan(p);
    }
    return out;
}

}  // namespace

SpectrumView::SpectrumView(GridSpec spec, std::vector<std::complex<double>> coeffs)
    : spec_(spec), coeffs_(std::move(coeffs)) {
    spec_.validate();
    require(coeffs_.size() == spec_.cells(), "coefficient count does not match grid");
}

SpectrumView SpectrumView::of(const GridFunction& u) {
    std::vector<std::complex<double>> in(u.values().begin(), u.values().end());
    auto out = fft(u.spec(), std::move(in), FFTW_FORWARD);
    const double inv = 1.0 / static_cast<double>(u.size());
    for (auto& c : out) c *= inv;
    return SpectrumView(u.spec(), std::move(out));
}

Index3 SpectrumView::wavevector(std::size_t i) const {
    Index3 k{0, 0, 0};
    const auto n = static_cast<std::size_t>(spec_.n);
    for (int a = spec_.d - 1; a >= 0; --a) {
        k[a] = wavenumber(static_cast<int>(i % n), spec_.n);
        i /= n;
    }
    return k;
}

std::complex<double> SpectrumView::at(const Index3& k) const {
    std::size_t i = 0;
    for (int a = 0; a < spec_.d; ++a) {
        int j = ((k[a] % spec_.n) + spec_.n) % spec_.n;
        i = i * static_cast<std::size_t>(spec_.n) + static_cast<std::size_t>(j);
    }
    return coeffs_[i];
}

double SpectrumView::xi2(std::size_t i, Symbol sym) const {
    Index3 k = wavevector(i);
    double s = 0.0;
    const double pi = std::numbers::pi;
    for (int a = 0; a < spec_.d; ++a) {
        if (sym == Symbol::continuous) {
            double xi = 2.0 * pi * k[a] / spec_.lambda;
            s += xi * xi;
        } else {
            double t = 2.0 / spec_.h() * std::sin(pi * k[a] / spec_.n);
            s += t * t;
        }
    }
    return s;
}

GridFunction SpectrumView::to_grid() const {
    auto out = fft(spec_, coeffs_, FFTW_BACKWARD);
    std::vector<double> v(out.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = out[i].real();
    return GridFunction(spec_, std::move(v));
}

double multiplier_energy(const GridFunction& u, double s, Symbol sym) {
    SpectrumView sp = SpectrumView::of(u);
    ExactSum acc;
    const auto& c = sp.coeffs();
    for (std::size_t i = 1; i < c.size(); ++i) {
        double x2 = sp.xi2(i, sym);
        if (x2 == 0.0) continue;
        acc.add(std::pow(x2, s) * std::norm(c[i]));
    }
    return acc.value() * u.spec().volume();
}

GridFunction convolve(const GridFunction& u, const GridFunction& kernel) {
    require(u.spec().d == kernel.spec().d && u.spec().n == kernel.spec().n, "kernel grid does not match");
    SpectrumView a = SpectrumView::of(u);
    SpectrumView b = SpectrumView::of(kernel);
    std::vector<std::complex<double>> c(a.coeffs().size());
    const double cells = static_cast<double>(u.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeffs()[i] * b.coeffs()[i] * cells;
    return SpectrumView(u.spec(), std::move(c)).to_grid();
}

GridFunction apply_multiplier(const GridFunction& u, double s, Symbol sym) {
    SpectrumView sp = SpectrumView::of(u);
    std::vector<std::complex<double>> c(sp.coeffs());
    c[0] = 0.0;
    for (std::size_t i = 1; i < c.size(); ++i) {
        double x2 = sp.xi2(i, sym);
        c[i] = x2 == 0.0 ? 0.0 : c[i] * std::pow(x2, s);
    }
    return SpectrumView(u.spec(), std::move(c)).to_grid();
}

}  // namespace ineqlab
