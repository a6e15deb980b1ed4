#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "benjamin/field.hpp"

namespace benjamin::testing {

// Random real trigonometric polynomial with modes 0..kmax, built directly in
// physical space so that it does not depend on the transform under test.
inline Field random_bandlimited(const Grid& grid, int kmax, unsigned seed, double amplitude = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> a(kmax + 1), b(kmax + 1);
    for (int k = 0; k <= kmax; ++k) {
        a[k] = normal(rng) * amplitude;
        b[k] = normal(rng) * amplitude;
    }
    const double base = 2.0 * std::numbers::pi / grid.length();
    return Field::from_function(grid, [&](double x) {
        double s = a[0];
        for (int k = 1; k <= kmax; ++k) s += a[k] * std::cos(base * k * x) + b[k] * std::sin(base * k * x);
        return s;
    });
}

inline double max_abs_diff(const Field& a, const Field& b) {
    double m = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
    return m;
}

inline double max_abs(const Field& a) {
    double m = 0.0;
    for (double v : a.values()) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace benjamin::testing
