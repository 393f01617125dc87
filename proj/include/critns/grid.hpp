// critns: periodic-grid substrate for critical-norm diagnostics.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace critns {

using Point3 = std::array<double, 3>;

/// Uniform periodic grid on [-L, L)^3 with cell-centered samples,
/// x_i = -L + (i + 1/2) h.  Cell-centered sampling keeps every sample
/// away from the origin, where the blow-up profile is singular.
struct Grid3 {
    int n = 0;            ///< points per axis, power of two, >= 8
    double half_width = 0.0;

    Grid3() = default;
    Grid3(int n_, double half_width_) : n(n_), half_width(half_width_) {
        validate();
    }

    void validate() const {
        if (n < 8 || (n & (n - 1)) != 0)
            throw std::invalid_argument("Grid3: n must be a power of two >= 8, got " +
                                        std::to_string(n));
        if (!(half_width > 0.0))
            throw std::invalid_argument("Grid3: half_width must be positive");
    }

    double spacing() const { return 2.0 * half_width / n; }
    std::size_t size() const {
        return static_cast<std::size_t>(n) * n * n;
    }
    double coord(int i) const { return -half_width + (i + 0.5) * spacing(); }

    /// Flat index, x-fastest.
    std::size_t index(int i, int j, int k) const {
        return static_cast<std::size_t>(i) +
               static_cast<std::size_t>(n) * (static_cast<std::size_t>(j) +
                                              static_cast<std::size_t>(n) * k);
    }
    Point3 point(int i, int j, int k) const {
        return {coord(i), coord(j), coord(k)};
    }
    double cell_volume() const {
        double h = spacing();
        return h * h * h;
    }
    bool operator==(const Grid3& o) const {
        return n == o.n && half_width == o.half_width;
    }
};

struct ScalarField {
    Grid3 grid;
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(const Grid3& g, double fill = 0.0)
        : grid(g), values(g.size(), fill) {}

    double& at(int i, int j, int k) { return values[grid.index(i, j, k)]; }
    double at(int i, int j, int k) const { return values[grid.index(i, j, k)]; }

    void check() const {
        if (values.size() != grid.size())
            throw std::invalid_argument("ScalarField: value count != n^3");
        for (double v : values)
            if (!std::isfinite(v))
                throw std::invalid_argument("ScalarField: non-finite value");
    }

    ScalarField& operator+=(const ScalarField& o) {
        for (std::size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
        return *this;
    }
    ScalarField& operator-=(const ScalarField& o) {
        for (std::size_t i = 0; i < values.size(); ++i) values[i] -= o.values[i];
        return *this;
    }
    ScalarField& operator*=(double a) {
        for (double& v : values) v *= a;
        return *this;
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }
    double mean() const {
        double s = 0.0;
        for (double v : values) s += v;
        return s / static_cast<double>(values.size());
    }
};

inline ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
inline ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
inline ScalarField operator*(double c, ScalarField a) { return a *= c; }

struct VectorField {
    Grid3 grid;
    std::array<ScalarField, 3> comp;

    VectorField() = default;
    explicit VectorField(const Grid3& g)
        : grid(g), comp{ScalarField(g), ScalarField(g), ScalarField(g)} {}

    ScalarField& operator[](int c) { return comp[c]; }
    const ScalarField& operator[](int c) const { return comp[c]; }

    void check() const {
        for (const auto& c : comp) {
            if (!(c.grid == grid))
                throw std::invalid_argument("VectorField: components on different grids");
            c.check();
        }
    }

    /// Pointwise magnitude |u|.
    ScalarField magnitude() const {
        ScalarField m(grid);
        for (std::size_t i = 0; i < m.values.size(); ++i)
            m.values[i] = std::sqrt(comp[0].values[i] * comp[0].values[i] +
                                    comp[1].values[i] * comp[1].values[i] +
                                    comp[2].values[i] * comp[2].values[i]);
        return m;
    }
    double max_abs() const { return magnitude().max_abs(); }

    VectorField& operator+=(const VectorField& o) {
        for (int c = 0; c < 3; ++c) comp[c] += o.comp[c];
        return *this;
    }
    VectorField& operator-=(const VectorField& o) {
        for (int c = 0; c < 3; ++c) comp[c] -= o.comp[c];
        return *this;
    }
    VectorField& operator*=(double a) {
        for (int c = 0; c < 3; ++c) comp[c] *= a;
        return *this;
    }
};

inline VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
inline VectorField operator*(double c, VectorField a) { return a *= c; }

inline double dist(const Point3& a, const Point3& b) {
    double d0 = a[0] - b[0], d1 = a[1] - b[1], d2 = a[2] - b[2];
    return std::sqrt(d0 * d0 + d1 * d1 + d2 * d2);
}

}  // namespace critns
