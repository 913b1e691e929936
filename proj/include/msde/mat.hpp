#pragma once

#include <cassert>
#include <cmath>
#include <span>
#include <vector>

namespace msde {

// Dense row-major matrix, sized for the small state dimensions used here.
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

    static Mat identity(int n, double scale = 1.0) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = scale;
        return m;
    }

    double& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    double at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

    // y = M x
    void apply(std::span<const double> x, std::span<double> y) const {
        assert(static_cast<int>(x.size()) == cols && static_cast<int>(y.size()) == rows);
        for (int i = 0; i < rows; ++i) {
            double s = 0.0;
            const double* row = a.data() + static_cast<std::size_t>(i) * cols;
            for (int j = 0; j < cols; ++j) s += row[j] * x[j];
            y[i] = s;
        }
    }

    double frobenius_sq() const {
        double s = 0.0;
        for (double v : a) s += v * v;
        return s;
    }
};

inline double dot(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

inline double norm2_sq(std::span<const double> x) { return dot(x, x); }
inline double norm2(std::span<const double> x) { return std::sqrt(norm2_sq(x)); }

inline double dist_sq(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double d = x[i] - y[i];
        s += d * d;
    }
    return s;
}

} // namespace msde
