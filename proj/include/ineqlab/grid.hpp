#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

namespace ineqlab {

struct GridSpec {
    int d = 1;
    int n = 1;
    double lambda = 1.0;

    double h() const { return lambda / n; }
    std::size_t cells() const;
    double cell_volume() const;  // h^d
    double volume() const;       // lambda^d
    void validate() const;
    bool operator==(const GridSpec&) const = default;
};

using Index3 = std::array<int, 3>;

// Piecewise-constant periodic function on [0, lambda]^d, row-major with the
// last axis fastest.
class GridFunction {
public:
    GridFunction() = default;
    GridFunction(GridSpec spec, std::vector<double> values);

    static GridFunction constant(GridSpec spec, double c);
    static GridFunction sample(GridSpec spec, const std::function<double(const std::array<double, 3>&)>& f);

    const GridSpec& spec() const { return spec_; }
    const std::vector<double>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }

    double integral() const;
    double mean() const;
    double max_abs() const;
    double min() const;
    double max() const;

    Index3 coords(std::size_t i) const;
    std::size_t index(const Index3& c) const;  // wraps periodically
    std::array<double, 3> center(std::size_t i) const;

    GridFunction map(const std::function<double(double)>& f) const;
    GridFunction operator+(const GridFunction& o) const;
    GridFunction operator-(const GridFunction& o) const;
    GridFunction operator*(double a) const;
    GridFunction operator+(double c) const;
    GridFunction operator-(double c) const { return *this + (-c); }

private:
    GridSpec spec_;
    std::vector<double> values_;
};

GridFunction make(const GridSpec& spec, std::vector<double> values);
GridFunction tile(const GridFunction& u, int k);
GridFunction dilate(const GridFunction& u, double ell, double M);
GridFunction refine(const GridFunction& u, int k);
GridFunction shift(const GridFunction& u, const Index3& offset);
GridFunction permute_axes(const GridFunction& u, const std::array<int, 3>& perm);

// Squared periodic distance between two points of the torus.
double torus_dist2(const std::array<double, 3>& a, const std::array<double, 3>& b, int d, double lambda);
// Same, for cell index displacements measured in cells.
double torus_cell_dist2(const Index3& a, const Index3& b, int d, int n);

bool same_values(const GridFunction& a, const GridFunction& b);

}  // namespace ineqlab
