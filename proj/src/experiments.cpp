#include "benjamin/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "benjamin/csv.hpp"
#include "benjamin/error.hpp"
#include "benjamin/spectral.hpp"
#include "parallel.hpp"

namespace benjamin {

namespace {

double mean(const std::vector<double>& v) {
    if (v.empty()) return std::nan("");
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double mx = mean(x);
    const double my = mean(y);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        num += (x[i] - mx) * (y[i] - my);
        den += (x[i] - mx) * (x[i] - mx);
    }
    return den > 0.0 ? num / den : std::nan("");
}

// Sum over |x| in the lab window x > edge of f(j) dx, nodes taken without wrapping.
template <class F>
double window_sum(const Grid& grid, double frame_shift, double edge, F&& f) {
    double s = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        if (grid.x(j) + frame_shift > edge) s += f(j);
    }
    return s * grid.dx();
}

Field random_field(const Grid& grid, int kmax, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> a(kmax + 1), b(kmax + 1);
    for (int k = 0; k <= kmax; ++k) {
        a[k] = normal(rng);
        b[k] = normal(rng);
    }
    const double base = 2.0 * std::numbers::pi / grid.length();
    return Field::from_function(grid, [&](double x) {
        double s = a[0];
        for (int k = 1; k <= kmax; ++k) s += a[k] * std::cos(base * k * x) + b[k] * std::sin(base * k * x);
        return s;
    });
}

std::string fmt_opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string("nan"); }

}  // namespace

void Report::add(const std::string& key, double value) { entries_.emplace_back(key, format_double(value)); }
void Report::add(const std::string& key, const std::string& value) { entries_.emplace_back(key, value); }
void Report::add_flag(const std::string& key, bool value) { entries_.emplace_back(key, value ? "true" : "false"); }

void write_conventions(std::ostream& out) {
    out << "[conventions]\n"
        << "equation = u_t + u_xxx + gamma H u_xx + u u_x = 0\n"
        << "hilbert_symbol = i sgn(xi); H cos(kx) = -sin(kx); H u_x = -D u\n"
        << "fractional_symbol = |xi|^s\n"
        << "grid = x_j = -L/2 + j L/n, xi_k = 2 pi k / L\n"
        << "fft = forward unnormalized, inverse scaled by 1/n\n"
        << "mass = 1/2 int u^2\n"
        << "energy = int 1/2 u_x^2 + gamma/2 (D^{1/2} u)^2 - u^3/6\n"
        << "profile_equation = c Q - Q'' - gamma H Q' - Q^2/2 = 0\n";
}

void Report::write(std::ostream& out, const ExperimentConfig& cfg) const {
    out << "# " << title_ << "\n\n";
    write_config(out, cfg);
    out << '\n';
    write_conventions(out);
    out << "\n[results]\n";
    for (const auto& [k, v] : entries_) out << k << " = " << v << '\n';
}

StabilityReport run_stability(const ExperimentConfig& cfg) {
    cfg.validate();
    const Grid grid = cfg.grid();
    const double gamma = cfg.wave.gamma;
    const double c = cfg.wave.c;
    const SolitaryWave wave = solve_wave(cfg.wave, grid);
    const Field u0 = wave.profile + make_perturbation(cfg.perturbation, wave.profile);
    const Trajectory traj = evolve(u0, gamma, cfg.evolution(c, wave.profile));

    StabilityReport rep;
    rep.gamma = gamma;
    rep.c = c;
    const double T = traj.records.back().t;

    std::vector<double> right_mass;
    for (const auto& r : traj.records) {
        if (r.t < 2.0 * T / 3.0) continue;
        const Field& u = *r.snapshot;
        right_mass.push_back(window_sum(grid, r.frame_shift, 0.5 * c * r.t, [&](std::size_t j) { return u[j] * u[j]; }));
    }
    rep.alpha2 = mean(right_mass);
    const MatchedSpeed matched = match_speed(rep.alpha2, gamma, grid);
    rep.c_star = matched.c_star;
    const Field& q_star = matched.wave.profile;

    rep.modulation = track_modulation(traj, wave, rep.c_star);
    const double dq = norm(derivative(wave.profile, 1), NormKind::L2);
    rep.rows.resize(traj.records.size());
    detail::parallel_for(traj.records.size(), [&](std::size_t i) {
        const auto& r = traj.records[i];
        const auto& m = rep.modulation[i];
        StabilityRow& row = rep.rows[i];
        row.t = r.t;
        row.rho = m.rho;
        row.xdot = m.rho_dot;
        row.eta_l2 = m.eta_l2;
        row.distance_h1 = m.distance_h1;
        row.ortho_ratio = m.eta_l2 > 0.0 ? m.ortho_defect / (dq * m.eta_l2) : 0.0;
        if (!m.ok) {
            row.err_right = std::nan("");
            return;
        }
        const Field e = *r.snapshot - shift(q_star, m.rho - r.frame_shift);
        const Field ex = derivative(e, 1);
        row.err_right = std::sqrt(
            window_sum(grid, r.frame_shift, 0.5 * c * r.t, [&](std::size_t j) { return e[j] * e[j] + ex[j] * ex[j]; }));
    });

    std::vector<double> mid, end, tail_t, tail_x;
    for (const auto& row : rep.rows) {
        if (row.t >= 0.45 * T && row.t <= 0.55 * T) mid.push_back(row.err_right);
        if (row.t >= 0.9 * T) {
            end.push_back(row.err_right);
            tail_t.push_back(row.t);
            tail_x.push_back(row.rho);
        }
        rep.proximity_sup = std::max(rep.proximity_sup, row.distance_h1);
        rep.max_ortho_ratio = std::max(rep.max_ortho_ratio, row.ortho_ratio);
    }
    rep.err_mid = mean(mid);
    rep.err_end = mean(end);
    rep.xdot_final = tail_t.size() >= 2 ? ls_slope(tail_t, tail_x) : rep.rows.back().xdot;
    rep.c_fit = rho_dot_constant(rep.modulation, rep.c_star);
    rep.error_decreasing = rep.err_end < rep.err_mid;
    rep.speed_matched = std::abs(rep.xdot_final - rep.c_star) < 1e-2;
    rep.orbit_lost = rep.proximity_sup > cfg.eps0;
    for (const auto& m : rep.modulation) rep.orbit_lost = rep.orbit_lost || !m.ok;
    return rep;
}

Report summarize(const StabilityReport& r) {
    Report out("stability");
    out.add("gamma", r.gamma);
    out.add("c", r.c);
    out.add("alpha2", r.alpha2);
    out.add("c_star", r.c_star);
    out.add("err_right_mid", r.err_mid);
    out.add("err_right_end", r.err_end);
    out.add("xdot_final", r.xdot_final);
    out.add("xdot_minus_c_star", r.xdot_final - r.c_star);
    out.add("proximity_sup", r.proximity_sup);
    out.add("c_fit", r.c_fit);
    out.add("max_ortho_ratio", r.max_ortho_ratio);
    out.add("err_right_label", std::string("local H1 error on x > c t/2 (finite-resolution proxy for weak convergence)"));
    out.add_flag("error_decreasing", r.error_decreasing);
    out.add_flag("speed_matched", r.speed_matched);
    out.add_flag("orbit_lost", r.orbit_lost);
    return out;
}

void write_stability_csv(std::ostream& out, const StabilityReport& report) {
    CsvWriter csv(out, {"t", "rho", "xdot", "err_right", "eta_l2", "distance_h1", "ortho_ratio"});
    for (const auto& r : report.rows) csv.row({r.t, r.rho, r.xdot, r.err_right, r.eta_l2, r.distance_h1, r.ortho_ratio});
}

KdvLimitReport run_kdv_limit(const ExperimentConfig& cfg) {
    cfg.validate();
    const Grid grid = cfg.grid();
    KdvLimitReport rep;
    rep.c = cfg.wave.c;
    const Field kdv = kdv_soliton(rep.c, grid);
    rep.zero_entry = norm(solve_wave({0.0, rep.c}, grid).profile - kdv, NormKind::H2);

    rep.rows.resize(cfg.gammas.size());
    std::vector<std::optional<Error>> failures(cfg.gammas.size());
    detail::parallel_for(cfg.gammas.size(), [&](std::size_t i) {
        try {
            const Field d = solve_wave({cfg.gammas[i], rep.c}, grid).profile - kdv;
            rep.rows[i] = {cfg.gammas[i], norm(d, NormKind::H1), norm(d, NormKind::H2)};
        } catch (const Error& e) {
            failures[i] = e;
        }
    });
    for (const auto& f : failures) {
        if (f) throw *f;
    }
    std::sort(rep.rows.begin(), rep.rows.end(),
              [](const KdvLimitRow& a, const KdvLimitRow& b) { return std::abs(a.gamma) > std::abs(b.gamma); });
    std::vector<double> g, h1, h2;
    rep.monotone = true;
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        g.push_back(std::abs(rep.rows[i].gamma));
        h1.push_back(rep.rows[i].diff_h1);
        h2.push_back(rep.rows[i].diff_h2);
        if (i > 0 && (rep.rows[i].diff_h1 >= rep.rows[i - 1].diff_h1 || rep.rows[i].diff_h2 >= rep.rows[i - 1].diff_h2)) {
            rep.monotone = false;
        }
    }
    rep.order_h1 = loglog_slope(g, h1);
    rep.order_h2 = loglog_slope(g, h2);
    return rep;
}

Report summarize(const KdvLimitReport& r) {
    Report out("kdv-limit");
    out.add("c", r.c);
    out.add("zero_entry_h2", r.zero_entry);
    for (const auto& row : r.rows) {
        out.add("diff_h1.gamma" + format_double(row.gamma), row.diff_h1);
        out.add("diff_h2.gamma" + format_double(row.gamma), row.diff_h2);
    }
    out.add("order_h1", fmt_opt(r.order_h1));
    out.add("order_h2", fmt_opt(r.order_h2));
    out.add_flag("monotone", r.monotone);
    return out;
}

void write_kdv_limit_csv(std::ostream& out, const KdvLimitReport& report) {
    CsvWriter csv(out, {"gamma", "diff_h1", "diff_h2"});
    for (const auto& r : report.rows) csv.row({r.gamma, r.diff_h1, r.diff_h2});
}

LiouvilleReport run_liouville_probe(const ExperimentConfig& cfg, bool with_nonlinear_evidence) {
    cfg.validate();
    const Grid grid = cfg.grid();
    const SolitaryWave wave = solve_wave(cfg.wave, grid);
    const Field v0 = make_perturbation(cfg.perturbation, wave.profile);
    EvolutionConfig ecfg = cfg.evolution(0.0);
    ecfg.keep_snapshots = false;
    const auto traj = evolve_perturbation(v0, wave, cfg.b, std::nullopt, TimeSeries::constant(cfg.wave.c), ecfg,
                                          cfg.radii);

    LiouvilleReport rep;
    rep.radii = cfg.radii;
    for (const auto& r : traj.records) {
        rep.times.push_back(r.t);
        rep.tails.push_back(r.tails);
        for (std::size_t k = 0; k < r.tails.size(); ++k) {
            rep.c_fit = std::max(rep.c_fit, r.tails[k] * std::pow(cfg.radii[k], 0.25));
        }
    }
    const auto& last = rep.tails.back();
    for (std::size_t k = 0; k < last.size(); ++k) rep.c_final = std::max(rep.c_final, last[k] * std::pow(cfg.radii[k], 0.25));
    rep.slope_final = loglog_slope(cfg.radii, last);

    if (with_nonlinear_evidence) {
        const Trajectory flow = evolve(wave.profile + v0, cfg.wave.gamma, cfg.evolution(cfg.wave.c, wave.profile));
        const double reach = *std::max_element(cfg.radii.begin(), cfg.radii.end());
        auto local_eta = [&](const TrajectoryRecord& r) {
            const Decomposition d = decompose(*r.snapshot, wave.profile);
            double s = 0.0;
            for (std::size_t j = 0; j < grid.size(); ++j) {
                if (std::abs(grid.x(j)) < reach) s += d.eta[j] * d.eta[j];
            }
            return std::sqrt(s * grid.dx());
        };
        rep.eta_local_initial = local_eta(flow.records.front());
        rep.eta_local_final = local_eta(flow.records.back());
        rep.eta_decays = rep.eta_local_final < rep.eta_local_initial;
    }
    return rep;
}

Report summarize(const LiouvilleReport& r) {
    Report out("liouville");
    out.add("C_fit", r.c_fit);
    out.add("C_final", r.c_final);
    out.add("slope_final", fmt_opt(r.slope_final));
    for (std::size_t k = 0; k < r.radii.size(); ++k) {
        out.add("tail_final.R" + format_double(r.radii[k]), r.tails.back()[k]);
    }
    out.add("eta_local_initial", r.eta_local_initial);
    out.add("eta_local_final", r.eta_local_final);
    out.add("eta_evidence_label", std::string("numerical evidence only"));
    out.add_flag("eta_decays", r.eta_decays);
    return out;
}

void write_liouville_csv(std::ostream& out, const LiouvilleReport& report) {
    std::vector<std::string> header{"t"};
    for (double r : report.radii) header.push_back("tail_R" + format_double(r));
    CsvWriter csv(out, header);
    for (std::size_t i = 0; i < report.times.size(); ++i) {
        std::vector<double> row{report.times[i]};
        row.insert(row.end(), report.tails[i].begin(), report.tails[i].end());
        csv.row(row);
    }
}

MonotonicityRun run_monotonicity(const ExperimentConfig& cfg, const std::vector<SweepFunctional>& which) {
    cfg.validate();
    const Grid grid = cfg.grid();
    const SolitaryWave wave = solve_wave(cfg.wave, grid);
    const Field u0 = wave.profile + make_perturbation(cfg.perturbation, wave.profile);
    MonotonicityRun run{evolve(u0, cfg.wave.gamma, cfg.evolution(cfg.wave.c, wave.profile)), {}};
    const auto mod = track_modulation(run.trajectory, wave);
    std::vector<double> ts, xs;
    for (const auto& m : mod) {
        if (!m.ok) throw Error(ErrorCode::OrbitLost, "modulation failed at t = " + format_double(m.t) + ": " + m.failure);
        ts.push_back(m.t);
        xs.push_back(m.rho);
    }
    const TimeSeries x(ts, xs);
    SweepOptions opts;
    opts.vartheta = cfg.vartheta;
    for (auto w : which) run.sweeps.push_back(monotonicity_sweep(run.trajectory, x, cfg.radii, w, opts));
    return run;
}

CommutatorReport run_commutator_test(const ExperimentConfig& cfg) {
    cfg.validate();
    const Grid grid = cfg.grid();
    const Grid fine(2 * cfg.n, cfg.L);
    const double two_pi = 2.0 * std::numbers::pi;
    const double L = cfg.L;
    const Field f = Field::from_function(grid, [&](double x) { return std::sin(two_pi * x / L); });
    const Field f_fine = Field::from_function(fine, [&](double x) { return std::sin(two_pi * x / L); });
    const int kmax = cfg.perturbation.kmax;
    const std::uint64_t seed = cfg.perturbation.seed;
    const std::size_t m = static_cast<std::size_t>(cfg.samples);

    CommutatorReport rep;
    rep.ratios.resize(m);
    std::vector<double> fine_ratios(m), scaling(m), deriv(m);
    detail::parallel_for(m, [&](std::size_t i) {
        const Field u = random_field(grid, kmax, seed + i);
        rep.ratios[i] = commutator_defect(f, u).ratio;
        fine_ratios[i] = commutator_defect(f_fine, random_field(fine, kmax, seed + i)).ratio;
        double worst = 0.0;
        for (double lambda : {1e-3, 0.5, 7.0, 1e4}) {
            worst = std::max(worst, std::abs(commutator_defect(f * lambda, u).ratio - rep.ratios[i]) / rep.ratios[i]);
        }
        scaling[i] = worst;
        const Field g = random_field(grid, 8, seed + 100000 + i);
        deriv[i] = commutator_derivative_defect(g, u, cfg.eps).ratio;
    });
    rep.derivative_ratios = deriv;
    rep.max_ratio = *std::max_element(rep.ratios.begin(), rep.ratios.end());
    rep.max_ratio_fine = *std::max_element(fine_ratios.begin(), fine_ratios.end());
    rep.scaling_defect = *std::max_element(scaling.begin(), scaling.end());
    rep.max_derivative_ratio = *std::max_element(deriv.begin(), deriv.end());

    rep.radii = cfg.radii;
    rep.operator_norms.resize(rep.radii.size());
    detail::parallel_for(rep.radii.size(), [&](std::size_t i) {
        rep.operator_norms[i] = commutator_operator_norm(psi_plateau(grid, rep.radii[i], -0.25 * L, 0.25 * L));
    });
    rep.slope = loglog_slope(rep.radii, rep.operator_norms);
    rep.target_slope = -(2.0 - cfg.eps) * 0.75;
    return rep;
}

Report summarize(const CommutatorReport& r) {
    Report out("commutator-test");
    out.add("samples", static_cast<double>(r.ratios.size()));
    out.add("max_ratio", r.max_ratio);
    out.add("max_ratio_doubled_grid", r.max_ratio_fine);
    out.add("scaling_defect", r.scaling_defect);
    out.add("max_derivative_ratio", r.max_derivative_ratio);
    for (std::size_t i = 0; i < r.radii.size(); ++i) {
        out.add("operator_norm.R" + format_double(r.radii[i]), r.operator_norms[i]);
    }
    out.add("slope", fmt_opt(r.slope));
    out.add("target_slope", r.target_slope);
    if (r.slope) out.add("slope_relative_error", std::abs(*r.slope - r.target_slope) / std::abs(r.target_slope));
    return out;
}

}  // namespace benjamin
