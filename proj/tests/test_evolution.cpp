#include <cmath>
#include <sstream>
#include <vector>

#include "benjamin/error.hpp"
#include "benjamin/evolution.hpp"
#include "benjamin/spectral.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace benjamin;
using benjamin::testing::max_abs;
using benjamin::testing::max_abs_diff;
using benjamin::testing::random_bandlimited;

namespace {
const Grid& grid() {
    static const Grid g(2048, 400.0);
    return g;
}

Field localized(double amplitude, double center = 0.0) {
    return Field::from_function(grid(), [=](double x) {
        const double s = (x - center) / 3.0;
        return amplitude * std::exp(-s * s) * std::cos(x);
    });
}
}  // namespace

TEST_CASE("mass and energy closed forms") {
    const Field z = Field::zeros(grid());
    CHECK(mass(z) == 0.0);
    CHECK(energy(z, 0.3) == 0.0);
    const Field q = kdv_soliton(1.0, grid());
    CHECK(mass(q) == doctest::Approx(12.0).epsilon(1e-12));
    CHECK(energy(q, 0.0) == doctest::Approx(-7.2).epsilon(1e-12));
}

TEST_CASE("energy Hilbert term cross-check") {
    const Grid g(256, 2.0 * std::acos(-1.0) * 4.0);
    for (unsigned seed : {1u, 2u, 3u}) {
        const Field u = random_bandlimited(g, 30, seed);
        const double gamma = 0.7;
        const double lhs = -0.5 * gamma * inner(u, hilbert(derivative(u, 1)));
        const double half = norm(u, NormKind::HalfSeminorm);
        const double rhs = 0.5 * gamma * half * half;
        CHECK(std::abs(lhs - rhs) < 1e-12 * std::abs(rhs));

        // the quadratic part of E against its quadrature form
        const Field ux = derivative(u, 1);
        double direct = 0.5 * inner(ux, ux) + lhs;
        for (double v : u.values()) direct -= v * v * v * g.dx() / 6.0;
        CHECK(energy(u, gamma) == doctest::Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("zero data stays zero") {
    EvolutionConfig cfg;
    cfg.T = 0.5;
    const Trajectory traj = evolve(Field::zeros(grid()), 0.2, cfg);
    CHECK(max_abs(traj.final_state) == 0.0);
    for (const auto& r : traj.records) CHECK(r.mass == 0.0);
}

TEST_CASE("records are ordered and carry invariants") {
    EvolutionConfig cfg;
    cfg.T = 1.0;
    cfg.dt = 1e-3;
    cfg.record_every = 300;
    const Trajectory traj = evolve(kdv_soliton(1.0, grid()), 0.0, cfg);
    REQUIRE(traj.records.size() == 5);  // 0, 300, 600, 900, 1000
    for (std::size_t i = 1; i < traj.records.size(); ++i) CHECK(traj.records[i].t > traj.records[i - 1].t);
    CHECK(traj.records.back().t == doctest::Approx(1.0));
    std::ostringstream csv;
    write_trajectory_csv(csv, traj);
    CHECK(csv.str().rfind("t,mass,energy,h1norm,linf\n", 0) == 0);
    std::ostringstream snap;
    write_snapshot_csv(snap, traj.final_state);
    CHECK(snap.str().rfind("x,u\n", 0) == 0);
}

TEST_CASE("solitary wave travels at its speed") {
    const SolitaryWave w = solve_wave({0.2, 1.0}, grid());
    EvolutionConfig cfg;
    cfg.T = 5.0;
    cfg.dt = 1e-3;
    const Trajectory traj = evolve(w.profile, 0.2, cfg);
    const Field expected = shift(w.profile, 5.0);
    CHECK(norm(traj.final_state - expected, NormKind::H1) < 1e-6);
}

TEST_CASE("KdV soliton peak moves with unit speed") {
    EvolutionConfig cfg;
    cfg.T = 4.0;
    cfg.dt = 1e-3;
    const Trajectory traj = evolve(kdv_soliton(1.0, grid()), 0.0, cfg);
    const Field& u = traj.final_state;
    std::size_t jmax = 0;
    for (std::size_t j = 1; j < u.size(); ++j) {
        if (u[j] > u[jmax]) jmax = j;
    }
    // parabolic peak refinement
    const double ym = u[jmax - 1], y0 = u[jmax], yp = u[jmax + 1];
    const double peak = grid().x(jmax) + 0.5 * grid().dx() * (ym - yp) / (ym - 2.0 * y0 + yp);
    CHECK(std::abs(peak / 4.0 - 1.0) < 1e-3);
}

TEST_CASE("conservation with small noise") {
    const SolitaryWave w = solve_wave({0.2, 1.0}, grid());
    const Field noise = localized(0.01);
    EvolutionConfig cfg;
    cfg.T = 2.0;
    const Trajectory traj = evolve(w.profile + noise, 0.2, cfg);
    const auto& first = traj.records.front();
    const auto& last = traj.records.back();
    CHECK(std::abs(last.mass - first.mass) / first.mass < 1e-9);
    CHECK(std::abs(last.energy - first.energy) / std::abs(first.energy) < 1e-8);
}

TEST_CASE("linear step equals the analytic multiplier") {
    const Field u0 = random_bandlimited(grid(), 200, 11u);
    EvolutionConfig cfg;
    cfg.T = 0.37;
    cfg.dt = 0.37;
    cfg.nonlinear = false;
    const double gamma = -0.4;
    const Trajectory traj = evolve(u0, gamma, cfg);
    const Field exact = apply_multiplier(u0, [&](double xi, bool nyquist) {
        if (nyquist) return std::complex<double>(1.0, 0.0);
        return std::polar(1.0, (xi * xi * xi + gamma * xi * std::abs(xi)) * 0.37);
    });
    CHECK(max_abs_diff(traj.final_state, exact) < 1e-12 * max_abs(u0));
}

TEST_CASE("fourth-order convergence in dt") {
    const SolitaryWave w = solve_wave({0.2, 1.0}, grid());
    const Field u0 = w.profile + localized(0.05, 10.0);
    auto run = [&](double dt) {
        EvolutionConfig cfg;
        cfg.T = 2.0;
        cfg.dt = dt;
        cfg.record_every = 1000000;
        return evolve(u0, 0.2, cfg).final_state;
    };
    const Field ref = run(0.00125);
    const double e1 = norm(run(0.01) - ref, NormKind::L2);
    const double e2 = norm(run(0.005) - ref, NormKind::L2);
    const double ratio = e1 / e2;
    CHECK(ratio > 12.0);
    CHECK(ratio < 20.0);
}

TEST_CASE("configuration errors") {
    const Field u = kdv_soliton(1.0, grid());
    auto expect_config_error = [&](EvolutionConfig cfg) {
        try {
            evolve(u, 0.0, cfg);
            FAIL("expected ConfigError");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::ConfigError);
        }
    };
    EvolutionConfig bad;
    bad.dt = 0.0;
    expect_config_error(bad);
    bad = {};
    bad.T = -1.0;
    expect_config_error(bad);
    bad = {};
    bad.sponge = Sponge{1.0, 100.0, std::nullopt};
    expect_config_error(bad);
    bad = {};
    bad.record_every = 0;
    expect_config_error(bad);
}

TEST_CASE("blowup is detected") {
    const Field u = Field::from_function(grid(), [](double x) { return 5e6 * std::exp(-x * x); });
    EvolutionConfig cfg;
    cfg.T = 0.01;
    try {
        evolve(u, 0.0, cfg);
        FAIL("expected BlowupDetected");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BlowupDetected);
    }
}

TEST_CASE("sponge absorbs outgoing radiation") {
    const Sponge sponge{1.0, 40.0};
    const Field s = sponge.profile(grid());
    CHECK(s[grid().size() / 2] == 0.0);
    CHECK(s[0] == doctest::Approx(1.0));
    EvolutionConfig cfg;
    cfg.T = 120.0;
    cfg.dt = 2e-2;
    cfg.sponge = sponge;
    const Field u0 = localized(0.1);
    const Trajectory traj = evolve(u0, 0.0, cfg);
    CHECK(traj.records.back().mass < 0.5 * traj.records.front().mass);
}

TEST_CASE("time series interpolation") {
    const TimeSeries ts({0.0, 1.0, 3.0}, {1.0, 3.0, -1.0});
    CHECK(ts(-1.0) == 1.0);
    CHECK(ts(0.5) == doctest::Approx(2.0));
    CHECK(ts(2.0) == doctest::Approx(1.0));
    CHECK(ts(10.0) == -1.0);
    CHECK(TimeSeries::constant(0.7)(123.0) == 0.7);
    CHECK_THROWS_AS(TimeSeries({1.0, 0.0}, {0.0, 0.0}), Error);
}

TEST_CASE("perturbation equation") {
    const SolitaryWave w = solve_wave({0.1, 1.0}, grid());
    const std::vector<double> radii{20.0, 40.0};
    EvolutionConfig cfg;
    cfg.T = 1.0;
    cfg.dt = 1e-3;
    cfg.record_every = 500;

    SUBCASE("zero data with zero forcing stays zero") {
        const auto traj = evolve_perturbation(Field::zeros(grid()), w, 1e-3, TimeSeries::constant(0.0),
                                              TimeSeries::constant(1.0), cfg, radii);
        CHECK(max_abs(traj.final_state) == 0.0);
        CHECK(traj.records.front().tails.size() == 2);
    }
    SUBCASE("coupling range") {
        CHECK_THROWS_AS(evolve_perturbation(Field::zeros(grid()), w, 0.0, std::nullopt, TimeSeries::constant(1.0),
                                            cfg, radii),
                        Error);
        CHECK_THROWS_AS(evolve_perturbation(Field::zeros(grid()), w, 1.0 / 64.0, std::nullopt,
                                            TimeSeries::constant(1.0), cfg, radii),
                        Error);
    }
    SUBCASE("small-b runs agree to first order") {
        const Field v0 = localized(1.0);
        auto run = [&](double b) {
            return evolve_perturbation(v0, w, b, std::nullopt, TimeSeries::constant(1.0), cfg, radii).final_state;
        };
        const Field v1 = run(1e-4);
        const Field v2 = run(2e-4);
        const Field v4 = run(4e-4);
        const double d12 = norm(v2 - v1, NormKind::L2);
        const double d24 = norm(v4 - v2, NormKind::L2);
        CHECK(d12 > 0.0);
        CHECK(d24 / d12 == doctest::Approx(2.0).epsilon(0.01));
    }
    SUBCASE("default forcing matches explicit c - xdot") {
        const Field v0 = localized(0.5);
        const TimeSeries xdot({0.0, 1.0}, {1.0, 1.01});
        const auto implicit = evolve_perturbation(v0, w, 1e-3, std::nullopt, xdot, cfg, radii).final_state;
        const TimeSeries a({0.0, 1.0}, {0.0, -0.01});
        const auto explicit_run = evolve_perturbation(v0, w, 1e-3, a, xdot, cfg, radii).final_state;
        CHECK(max_abs_diff(implicit, explicit_run) < 1e-12);
    }
}

TEST_CASE("tail norm") {
    const Field z = Field::zeros(grid());
    CHECK(tail_norm(z, 10.0) == 0.0);
    const Field v = localized(1.0);
    CHECK(tail_norm(v, 50.0) < 1e-25);
    // |x| > 0 drops the node at the origin, where v = 1 and v_x = 0
    CHECK(tail_norm(v, 0.0) + grid().dx() == doctest::Approx(std::pow(norm(v, NormKind::H1), 2)).epsilon(1e-12));
}

TEST_CASE("rescaling symmetry") {
    const Field q1 = kdv_soliton(1.0, grid());
    SUBCASE("identity") {
        const Rescaled r = rescale(q1, 1.0, WaveParams{0.3, 1.0});
        CHECK(max_abs_diff(r.field, q1) < 1e-12);
        CHECK(r.params->gamma == 0.3);
        CHECK(r.params->c == 1.0);
    }
    SUBCASE("KdV soliton to c = 4") {
        const Rescaled r = rescale(q1, 2.0);
        CHECK(max_abs_diff(r.field, kdv_soliton(4.0, grid())) < 1e-9);
    }
    SUBCASE("profile residual is preserved") {
        const SolitaryWave w = solve_wave({0.2, 1.0}, grid());
        const Rescaled r = rescale_periodic(w.profile, 1.1, w.params);
        CHECK(r.params->gamma == doctest::Approx(0.22));
        CHECK(r.params->c == doctest::Approx(1.21));
        CHECK(r.field.grid().length() == doctest::Approx(400.0 / 1.1));
        CHECK(eqq_residual(r.field, *r.params) < 1e-6);

        // on the original box the interpolated profile agrees with a direct solve up to the cut tail
        const Rescaled same = rescale(w.profile, 1.1, w.params);
        const SolitaryWave direct = solve_wave(*same.params, grid());
        CHECK(norm(same.field - direct.profile, NormKind::Linf) < 1e-4);
    }
    SUBCASE("negative lambda reflects") {
        const Rescaled r = rescale(q1, -1.0, WaveParams{0.3, 1.0});
        CHECK(max_abs_diff(r.field, q1) < 1e-12);
        CHECK(r.params->gamma == 0.3);
        const Field bump = localized(1.0, 20.0);
        CHECK(max_abs_diff(rescale(bump, -1.0).field, bump.reflected()) < 1e-12);
        CHECK(max_abs_diff(rescale_periodic(bump, -1.0).field, bump.reflected()) == 0.0);
    }
    SUBCASE("resolution loss") {
        CHECK_THROWS_AS(rescale(q1, 40.0), Error);
        CHECK_THROWS_AS(rescale(q1, 0.05), Error);
        CHECK_THROWS_AS(rescale(q1, 0.0), Error);
    }
}
