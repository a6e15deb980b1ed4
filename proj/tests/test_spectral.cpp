#include <cmath>
#include <numbers>

#include "benjamin/error.hpp"
#include "benjamin/solitary_wave.hpp"
#include "benjamin/spectral.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace benjamin;
using benjamin::testing::max_abs;
using benjamin::testing::max_abs_diff;
using benjamin::testing::random_bandlimited;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TEST_CASE("make_grid builds nodes and exact wavenumbers") {
    const Grid g = make_grid(16, kTwoPi);
    const auto xi = g.wavenumbers();
    REQUIRE(xi.size() == 16);
    for (int k = -8; k < 8; ++k) CHECK(xi[k + 8] == doctest::Approx(k).epsilon(1e-15));
    CHECK(make_grid(1024, 400.0).dx() == 0.390625);
    CHECK(g.x(0) == doctest::Approx(-std::numbers::pi));
    CHECK(g.dx() * 16 == doctest::Approx(kTwoPi).epsilon(1e-16));
}

TEST_CASE("make_grid rejects bad sizes") {
    CHECK_THROWS_AS(make_grid(17, 1.0), Error);
    CHECK_THROWS_AS(make_grid(8, 1.0), Error);
    CHECK_THROWS_AS(make_grid(64, 0.0), Error);
    CHECK_THROWS_AS(make_grid(64, -2.0), Error);
}

TEST_CASE("fields reject non-finite samples") {
    const Grid g(16, 1.0);
    std::vector<double> v(16, 0.0);
    v[3] = std::nan("");
    CHECK_THROWS_AS(Field(g, v), Error);
}

TEST_CASE("derivative acts on eigenfunctions") {
    const Grid g(64, kTwoPi);
    const Field s = Field::from_function(g, [](double x) { return std::sin(x); });
    CHECK(max_abs_diff(derivative(s, 1), Field::from_function(g, [](double x) { return std::cos(x); })) < 1e-13);

    const Field s2 = Field::from_function(g, [](double x) { return std::sin(2 * x); });
    CHECK(max_abs_diff(derivative(s2, 3), Field::from_function(g, [](double x) { return -8 * std::cos(2 * x); })) <
          1e-10);

    const Field c = Field::from_function(g, [](double) { return 3.5; });
    for (int k = 1; k <= 3; ++k) CHECK(max_abs(derivative(c, k)) < 1e-14);
    CHECK_THROWS_AS(derivative(c, 4), Error);
}

TEST_CASE("odd-order derivatives drop the Nyquist mode") {
    const Grid g(32, kTwoPi);
    const Field nyq = Field::from_function(g, [](double x) { return std::cos(16 * x); });
    CHECK(max_abs(derivative(nyq, 1)) < 1e-12);
    CHECK(max_abs(derivative(nyq, 3)) < 1e-9);
    CHECK(max_abs(hilbert(nyq)) < 1e-12);
}

TEST_CASE("hilbert transform of cosines and constants") {
    const Grid g(128, kTwoPi);
    for (int k : {1, 3, 7}) {
        const Field c = Field::from_function(g, [k](double x) { return std::cos(k * x); });
        const Field expect = Field::from_function(g, [k](double x) { return -std::sin(k * x); });
        CHECK(max_abs_diff(hilbert(c), expect) < 1e-13);
    }
    const Field one = Field::from_function(g, [](double) { return 1.0; });
    CHECK(max_abs(hilbert(one)) < 1e-15);
    const Field u = random_bandlimited(g, 20, 7);
    CHECK(std::abs(integrate(hilbert(u))) < 1e-12);
}

TEST_CASE("hilbert of derivative equals minus D_x") {
    const Grid g(256, 40.0);
    for (unsigned seed = 1; seed <= 5; ++seed) {
        const Field u = random_bandlimited(g, 30, seed);
        const Field lhs = hilbert(derivative(u, 1));
        const Field rhs = fractional_derivative(u, 1.0);
        CHECK(max_abs(lhs + rhs) < 1e-12 * max_abs(rhs));
    }
}

TEST_CASE("fractional derivative symbol") {
    const Grid g(64, kTwoPi);
    const Field s = Field::from_function(g, [](double x) { return std::sin(x); });
    CHECK(max_abs_diff(fractional_derivative(s, 0.5), s) < 1e-13);
    const Field s4 = Field::from_function(g, [](double x) { return std::sin(4 * x); });
    CHECK(max_abs_diff(fractional_derivative(s4, 2.0), s4 * 16.0) < 1e-12);
    const Field c = Field::from_function(g, [](double) { return -2.0; });
    CHECK(max_abs(fractional_derivative(c, 0.7)) < 1e-15);
    CHECK_THROWS_AS(fractional_derivative(c, -1.0), Error);
}

TEST_CASE("dealias keeps the resolved band and removes aliased products") {
    const Grid g(64, kTwoPi);
    const Field u = random_bandlimited(g, 21, 3);  // 21 = n/3
    CHECK(max_abs_diff(dealias(u), u) < 1e-13);

    const Field nyq = Field::from_function(g, [](double x) { return std::cos(32 * x); });
    CHECK(max_abs(dealias(nyq)) < 1e-15);

    // cos(21x)^2 = 1/2 + cos(42x)/2, and mode 42 aliases onto 22 > 21.
    const Field c21 = Field::from_function(g, [](double x) { return std::cos(21 * x); });
    const Field sq = dealias(c21.times(c21));
    for (double v : sq.values()) CHECK(v == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("norms") {
    const Grid g(64, kTwoPi);
    const Field s = Field::from_function(g, [](double x) { return std::sin(x); });
    CHECK(norm(s, NormKind::L2) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
    CHECK(norm(s, NormKind::H1) == doctest::Approx(std::sqrt(2 * std::numbers::pi)).epsilon(1e-14));
    CHECK(norm(s, NormKind::HalfSeminorm) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
    CHECK(norm(s, NormKind::Linf) == doctest::Approx(1.0).epsilon(1e-3));

    const Field z = Field::zeros(g);
    for (auto k : {NormKind::L2, NormKind::H1, NormKind::H2, NormKind::HalfSeminorm, NormKind::Linf}) {
        CHECK(norm(z, k) == 0.0);
    }
    CHECK(norm_linf_restricted(z, -1.0, 1.0) == 0.0);
    CHECK(norm_linf_restricted(s, 0.0, 1.0) == doctest::Approx(std::sin(1.0)).epsilon(0.02));
    CHECK_THROWS_AS(norm_linf_restricted(s, -10.0, 1.0), Error);

    // 9 * int sech^4(x/2) dx = 24.
    const Grid wide(1024, 100.0);
    CHECK(std::pow(norm(kdv_soliton(1.0, wide), NormKind::L2), 2) == doctest::Approx(24.0).epsilon(1e-13));
}

TEST_CASE("Parseval with the unnormalized forward transform") {
    const Grid g(512, 37.0);
    for (unsigned seed = 11; seed < 16; ++seed) {
        const Field u = random_bandlimited(g, 60, seed);
        const Spectrum c = u.spectrum();
        double full = std::norm(c.front()) + std::norm(c.back());
        for (std::size_t k = 1; k + 1 < c.size(); ++k) full += 2.0 * std::norm(c[k]);
        const double n = static_cast<double>(g.size());
        const double l2sq = inner(u, u);
        CHECK(std::abs(l2sq - g.length() / (n * n) * full) < 1e-12 * l2sq);
    }
}

TEST_CASE("spectral invariants on random fields") {
    const Grid g(256, 25.0);
    for (unsigned seed = 21; seed < 26; ++seed) {
        const Field u = random_bandlimited(g, 40, seed);
        const Field v = random_bandlimited(g, 40, seed + 100);

        // antisymmetry of H
        const double a = inner(hilbert(u), v);
        const double b = inner(u, hilbert(v));
        CHECK(std::abs(a + b) < 1e-12 * (std::abs(a) + std::abs(b)));

        // H o H = -(Id - mean)
        const double mean = integrate(u) / g.length();
        const Field hh = hilbert(hilbert(u));
        const Field expect = (u - Field::from_function(g, [mean](double) { return mean; })) * -1.0;
        CHECK(max_abs_diff(hh, expect) < 1e-12 * max_abs(u));

        // round trip
        const Field back = Field::from_spectrum(g, u.spectrum());
        CHECK(max_abs_diff(back, u) < 1e-12 * max_abs(u));
    }
}

TEST_CASE("shift and interpolation agree with the analytic translate") {
    const Grid g(128, kTwoPi);
    const Field u = Field::from_function(g, [](double x) { return std::sin(3 * x) + std::cos(x); });
    const double s = 0.37;
    const Field shifted = shift(u, s);
    const Field expect = Field::from_function(g, [s](double x) { return std::sin(3 * (x - s)) + std::cos(x - s); });
    CHECK(max_abs_diff(shifted, expect) < 1e-13);

    const std::vector<double> pts{0.1, -2.0, 3.0};
    const auto vals = interpolate(u, pts);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        CHECK(vals[i] == doctest::Approx(std::sin(3 * pts[i]) + std::cos(pts[i])).epsilon(1e-13));
    }
}
