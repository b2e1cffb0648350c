#include "ineqlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ineqlab/error.hpp"
#include "ineqlab/exact_sum.hpp"

namespace ineqlab {

std::size_t GridSpec::cells() const {
    std::size_t c = 1;
    for (int a = 0; a < d; ++a) c *= static_cast<std::size_t>(n);
    return c;
}

double GridSpec::cell_volume() const { return std::pow(h(), d); }

double GridSpec::volume() const { return std::pow(lambda, d); }

void GridSpec::validate() const {
    require(d >= 1 && d <= 3, "grid dimension must be 1, 2 or 3");
    require(n >= 1, "grid needs at least one cell per axis");
    require(std::isfinite(lambda) && lambda > 0.0, "period must be positive and finite");
}

GridFunction::GridFunction(GridSpec spec, std::vector<double> values) : spec_(spec), values_(std::move(values)) {
    spec_.validate();
    require(values_.size() == spec_.cells(),
            "value count " + std::to_string(values_.size()) + " does not match n^d = " + std::to_string(spec_.cells()));
    for (double v : values_) require(std::isfinite(v), "grid values must be finite");
}

GridFunction GridFunction::constant(GridSpec spec, double c) {
    spec.validate();
    return GridFunction(spec, std::vector<double>(spec.cells(), c));
}

GridFunction GridFunction::sample(GridSpec spec, const std::function<double(const std::array<double, 3>&)>& f) {
    spec.validate();
    std::vector<double> v(spec.cells());
    GridFunction tmp(spec, std::vector<double>(spec.cells(), 0.0));
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(tmp.center(i));
    return GridFunction(spec, std::move(v));
}

double GridFunction::integral() const { return exact_sum(values_) * spec_.cell_volume(); }

double GridFunction::mean() const {
    return exact_sum(values_) / static_cast<double>(values_.size());
}

double GridFunction::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

double GridFunction::min() const { return *std::min_element(values_.begin(), values_.end()); }

double GridFunction::max() const { return *std::max_element(values_.begin(), values_.end()); }

Index3 GridFunction::coords(std::size_t i) const {
    Index3 c{0, 0, 0};
    const auto n = static_cast<std::size_t>(spec_.n);
    for (int a = spec_.d - 1; a >= 0; --a) {
        c[a] = static_cast<int>(i % n);
        i /= n;
    }
    return c;
}

std::size_t GridFunction::index(const Index3& c) const {
    std::size_t i = 0;
    const int n = spec_.n;
    for (int a = 0; a < spec_.d; ++a) {
        int k = ((c[a] % n) + n) % n;
        i = i * static_cast<std::size_t>(n) + static_cast<std::size_t>(k);
    }
    return i;
}

std::array<double, 3> GridFunction::center(std::size_t i) const {
    Index3 c = coords(i);
    std::array<double, 3> x{0.0, 0.0, 0.0};
    for (int a = 0; a < spec_.d; ++a) x[a] = (c[a] + 0.5) * spec_.h();
    return x;
}

GridFunction GridFunction::map(const std::function<double(double)>& f) const {
    std::vector<double> v(values_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(values_[i]);
    return GridFunction(spec_, std::move(v));
}

GridFunction GridFunction::operator+(const GridFunction& o) const {
    require(spec_ == o.spec_, "grid specs differ");
    std::vector<double> v(values_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = values_[i] + o.values_[i];
    return GridFunction(spec_, std::move(v));
}

GridFunction GridFunction::operator-(const GridFunction& o) const {
    require(spec_ == o.spec_, "grid specs differ");
    std::vector<double> v(values_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = values_[i] - o.values_[i];
    return GridFunction(spec_, std::move(v));
}

GridFunction GridFunction::operator*(double a) const {
    return map([a](double x) { return a * x; });
}

GridFunction GridFunction::operator+(double c) const {
    return map([c](double x) { return x + c; });
}

GridFunction make(const GridSpec& spec, std::vector<double> values) { return GridFunction(spec, std::move(values)); }

GridFunction tile(const GridFunction& u, int k) {
    require(k >= 1, "tile factor must be >= 1");
    const GridSpec& s = u.spec();
    GridSpec t{s.d, s.n * k, s.lambda * k};
    std::vector<double> v(t.cells());
    GridFunction shape(t, std::vector<double>(t.cells(), 0.0));
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = u[u.index(shape.coords(i))];
    return GridFunction(t, std::move(v));
}

GridFunction dilate(const GridFunction& u, double ell, double M) {
    require(ell > 0.0 && std::isfinite(ell), "dilation scale must be positive");
    GridSpec t = u.spec();
    t.lambda *= ell;
    std::vector<double> v(u.values());
    for (double& x : v) x *= M;
    return GridFunction(t, std::move(v));
}

GridFunction refine(const GridFunction& u, int k) {
    require(k >= 1, "refine factor must be >= 1");
    const GridSpec& s = u.spec();
    GridSpec t{s.d, s.n * k, s.lambda};
    std::vector<double> v(t.cells());
    GridFunction shape(t, std::vector<double>(t.cells(), 0.0));
    for (std::size_t i = 0; i < v.size(); ++i) {
        Index3 c = shape.coords(i);
        for (int a = 0; a < s.d; ++a) c[a] /= k;
        v[i] = u[u.index(c)];
    }
    return GridFunction(t, std::move(v));
}

GridFunction shift(const GridFunction& u, const Index3& offset) {
    std::vector<double> v(u.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        Index3 c = u.coords(i);
        for (int a = 0; a < u.spec().d; ++a) c[a] += offset[a];
        v[u.index(c)] = u[i];
    }
    return GridFunction(u.spec(), std::move(v));
}

GridFunction permute_axes(const GridFunction& u, const std::array<int, 3>& perm) {
    const int d = u.spec().d;
    std::vector<bool> seen(3, false);
    for (int a = 0; a < d; ++a) {
        require(perm[a] >= 0 && perm[a] < d && !seen[perm[a]], "invalid axis permutation");
        seen[perm[a]] = true;
    }
    std::vector<double> v(u.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        Index3 c = u.coords(i);
        Index3 p{0, 0, 0};
        for (int a = 0; a < d; ++a) p[a] = c[perm[a]];
        v[u.index(p)] = u[i];
    }
    return GridFunction(u.spec(), std::move(v));
}

double torus_dist2(const std::array<double, 3>& a, const std::array<double, 3>& b, int d, double lambda) {
    double s = 0.0;
    for (int k = 0; k < d; ++k) {
        double t = std::abs(a[k] - b[k]);
        t = std::fmod(t, lambda);
        t = std::min(t, lambda - t);
        s += t * t;
    }
    return s;
}

double torus_cell_dist2(const Index3& a, const Index3& b, int d, int n) {
    double s = 0.0;
    for (int k = 0; k < d; ++k) {
        int t = std::abs(a[k] - b[k]) % n;
        t = std::min(t, n - t);
        s += static_cast<double>(t) * t;
    }
    return s;
}

bool same_values(const GridFunction& a, const GridFunction& b) {
    return a.spec() == b.spec() && a.values() == b.values();
}

}  // namespace ineqlab
