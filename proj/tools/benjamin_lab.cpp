#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "benjamin/config.hpp"
#include "benjamin/csv.hpp"
#include "benjamin/error.hpp"
#include "benjamin/experiments.hpp"
#include "benjamin/spectral.hpp"
#include "benjamin/svg.hpp"

using namespace benjamin;
namespace fs = std::filesystem;

namespace {

struct Overrides {
    std::string config;
    std::optional<std::string> out;
    std::optional<long long> seed;
    std::optional<double> gamma, c, L, dt, T;
    std::optional<long long> n;
    std::optional<double> lambda, b, eps;
    std::optional<int> samples;
    std::optional<std::string> functional, perturbation;
    std::optional<std::string> radii;
};

ExperimentConfig resolve(const Overrides& o) {
    ExperimentConfig cfg = o.config.empty() ? ExperimentConfig{} : load_config(o.config);
    if (o.out) cfg.out_dir = *o.out;
    if (o.seed) {
        if (*o.seed < 0) throw Error(ErrorCode::ConfigError, "seed must be >= 0");
        cfg.perturbation.seed = static_cast<std::uint64_t>(*o.seed);
    }
    if (o.gamma) cfg.wave.gamma = *o.gamma;
    if (o.c) cfg.wave.c = *o.c;
    if (o.n) {
        if (*o.n <= 0) throw Error(ErrorCode::ConfigError, "n must be positive");
        cfg.n = static_cast<std::size_t>(*o.n);
    }
    if (o.L) cfg.L = *o.L;
    if (o.dt) cfg.dt = *o.dt;
    if (o.T) cfg.T = *o.T;
    if (o.lambda) cfg.lambda = *o.lambda;
    if (o.b) cfg.b = *o.b;
    if (o.eps) cfg.eps = *o.eps;
    if (o.samples) cfg.samples = *o.samples;
    if (o.functional) cfg.functional = *o.functional;
    if (o.perturbation) {
        bool found = false;
        for (auto s : {PerturbationShape::None, PerturbationShape::Even, PerturbationShape::Odd, PerturbationShape::Noise}) {
            if (*o.perturbation == to_string(s)) {
                cfg.perturbation.shape = s;
                found = true;
            }
        }
        if (!found) throw Error(ErrorCode::ConfigError, "unknown perturbation shape '" + *o.perturbation + "'");
    }
    if (o.radii) {
        std::vector<double> r;
        std::stringstream ss(*o.radii);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                r.push_back(std::stod(item));
            } catch (const std::exception&) {
                throw Error(ErrorCode::ConfigError, "invalid R list '" + *o.radii + "'");
            }
        }
        cfg.radii = r;
    }
    cfg.validate();
    return cfg;
}

std::ofstream open_out(const ExperimentConfig& cfg, const std::string& name) {
    const fs::path path = fs::path(cfg.out_dir) / name;
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
    return out;
}

void prepare(const ExperimentConfig& cfg) {
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec || !fs::is_directory(cfg.out_dir)) {
        throw Error(ErrorCode::IoError, "cannot create output directory '" + cfg.out_dir + "'");
    }
}

void finish(const ExperimentConfig& cfg, const Report& report) {
    auto out = open_out(cfg, "report.txt");
    report.write(out, cfg);
    std::cout << "wrote " << (fs::path(cfg.out_dir) / "report.txt").string() << '\n';
}

int cmd_solve_wave(const ExperimentConfig& cfg) {
    const Grid grid = cfg.grid();
    const SolitaryWave w = solve_wave(cfg.wave, grid);
    auto csv = open_out(cfg, "profile.csv");
    write_profile_csv(csv, w.profile);
    Report rep("solve-wave");
    rep.add("gamma", w.params.gamma);
    rep.add("c", w.params.c);
    rep.add("peak", w.profile[grid.size() / 2]);
    rep.add("l2sq", inner(w.profile, w.profile));
    rep.add("mass", mass(w.profile));
    rep.add("energy", energy(w.profile, w.params.gamma));
    rep.add("residual", w.residual);
    rep.add("iterations", static_cast<double>(w.iterations));
    rep.add("stabilizing_factor", w.stabilizing_factor);
    rep.add("decay_constant", w.decay_constant);
    finish(cfg, rep);
    return 0;
}

int cmd_evolve(const ExperimentConfig& cfg) {
    const Grid grid = cfg.grid();
    const SolitaryWave w = solve_wave(cfg.wave, grid);
    const Field u0 = w.profile + make_perturbation(cfg.perturbation, w.profile);
    EvolutionConfig ecfg = cfg.evolution(cfg.wave.c, w.profile);
    ecfg.keep_snapshots = false;
    const Trajectory traj = evolve(u0, cfg.wave.gamma, ecfg);
    auto csv = open_out(cfg, "trajectory.csv");
    write_trajectory_csv(csv, traj);
    auto snap = open_out(cfg, "final.csv");
    write_snapshot_csv(snap, traj.final_state);
    PlotSeries m{"mass", {}, {}};
    for (const auto& r : traj.records) {
        m.x.push_back(r.t);
        m.y.push_back(r.mass);
    }
    auto svg = open_out(cfg, "mass.svg");
    write_svg_plot(svg, {m}, {"mass", "t", "M(u)"});
    const auto& a = traj.records.front();
    const auto& b = traj.records.back();
    Report rep("evolve");
    rep.add("mass_initial", a.mass);
    rep.add("mass_final", b.mass);
    rep.add("mass_relative_drift", (b.mass - a.mass) / a.mass);
    rep.add("energy_initial", a.energy);
    rep.add("energy_final", b.energy);
    rep.add("energy_relative_drift", (b.energy - a.energy) / std::abs(a.energy));
    rep.add("frame_speed", traj.frame_speed);
    finish(cfg, rep);
    return 0;
}

int cmd_stability(const ExperimentConfig& cfg) {
    const StabilityReport r = run_stability(cfg);
    auto csv = open_out(cfg, "stability.csv");
    write_stability_csv(csv, r);
    auto mod = open_out(cfg, "modulation.csv");
    write_modulation_csv(mod, r.modulation);
    PlotSeries err{"H1 error right of ct/2", {}, {}}, xd{"xdot", {}, {}}, cs{"c*", {}, {}};
    for (const auto& row : r.rows) {
        err.x.push_back(row.t);
        err.y.push_back(row.err_right);
        xd.x.push_back(row.t);
        xd.y.push_back(row.xdot);
        cs.x.push_back(row.t);
        cs.y.push_back(r.c_star);
    }
    auto s1 = open_out(cfg, "err_right.svg");
    write_svg_plot(s1, {err}, {"local H1 error", "t", "error", true});
    auto s2 = open_out(cfg, "xdot.svg");
    write_svg_plot(s2, {xd, cs}, {"translation speed", "t", "xdot"});
    finish(cfg, summarize(r));
    if (r.orbit_lost) {
        std::cerr << "OrbitLost: proximity " << r.proximity_sup << " exceeds eps0 = " << cfg.eps0 << " (outputs kept)\n";
        return 1;
    }
    return 0;
}

int cmd_kdv_limit(const ExperimentConfig& cfg) {
    const KdvLimitReport r = run_kdv_limit(cfg);
    auto csv = open_out(cfg, "kdv_limit.csv");
    write_kdv_limit_csv(csv, r);
    PlotSeries h1{"H1", {}, {}}, h2{"H2", {}, {}};
    for (const auto& row : r.rows) {
        h1.x.push_back(row.gamma);
        h1.y.push_back(row.diff_h1);
        h2.x.push_back(row.gamma);
        h2.y.push_back(row.diff_h2);
    }
    auto svg = open_out(cfg, "kdv_limit.svg");
    write_svg_plot(svg, {h1, h2}, {"distance to the KdV soliton", "gamma", "norm", true});
    finish(cfg, summarize(r));
    return 0;
}

int cmd_liouville(const ExperimentConfig& cfg) {
    const LiouvilleReport r = run_liouville_probe(cfg);
    auto csv = open_out(cfg, "tails.csv");
    write_liouville_csv(csv, r);
    PlotSeries s{"final tail", r.radii, r.tails.back()};
    auto svg = open_out(cfg, "tails.svg");
    write_svg_plot(svg, {s}, {"tail norm at the final time", "R", "tail", true});
    finish(cfg, summarize(r));
    return 0;
}

int cmd_monotonicity(const ExperimentConfig& cfg) {
    std::vector<SweepFunctional> which;
    if (cfg.functional == "all") {
        which = {SweepFunctional::IRight, SweepFunctional::ILeft, SweepFunctional::Combo4IJ, SweepFunctional::HRight};
    } else {
        which = {parse_sweep_functional(cfg.functional)};
    }
    const MonotonicityRun run = run_monotonicity(cfg, which);
    Report rep("monotonicity");
    for (const auto& s : run.sweeps) {
        const std::string name = to_string(s.which);
        auto csv = open_out(cfg, "sweep_" + name + ".csv");
        write_sweep_csv(csv, s);
        auto sum = open_out(cfg, "sweep_" + name + "_summary.txt");
        write_sweep_summary(sum, s);
        rep.add(name + ".K_min", s.k_min);
        rep.add(name + ".slope", s.slope ? format_double(*s.slope) : std::string("nan"));
        rep.add(name + ".warnings", static_cast<double>(s.warnings.size()));
        for (const auto& w : s.warnings) std::cerr << name << ": " << w << '\n';
    }
    finish(cfg, rep);
    return 0;
}

int cmd_commutator(const ExperimentConfig& cfg) {
    const CommutatorReport r = run_commutator_test(cfg);
    auto csv = open_out(cfg, "commutator.csv");
    {
        CsvWriter w(csv, {"sample", "ratio", "derivative_ratio"});
        for (std::size_t i = 0; i < r.ratios.size(); ++i) w.row({double(i), r.ratios[i], r.derivative_ratios[i]});
    }
    auto besov = open_out(cfg, "operator_norm.csv");
    {
        CsvWriter w(besov, {"R", "operator_norm"});
        for (std::size_t i = 0; i < r.radii.size(); ++i) w.row({r.radii[i], r.operator_norms[i]});
    }
    finish(cfg, summarize(r));
    return 0;
}

int cmd_rescale(const ExperimentConfig& cfg) {
    const Grid grid = cfg.grid();
    const SolitaryWave w = solve_wave(cfg.wave, grid);
    const Rescaled same = rescale(w.profile, cfg.lambda, w.params);
    const Rescaled exact = rescale_periodic(w.profile, cfg.lambda, w.params);
    auto csv = open_out(cfg, "rescaled.csv");
    write_snapshot_csv(csv, same.field);
    Report rep("rescale");
    rep.add("lambda", cfg.lambda);
    rep.add("gamma_rescaled", same.params->gamma);
    rep.add("c_rescaled", same.params->c);
    rep.add("residual_same_grid", eqq_residual(same.field, *same.params));
    rep.add("residual_dilated_grid", eqq_residual(exact.field, *exact.params));
    rep.add("dilated_length", exact.field.grid().length());
    finish(cfg, rep);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Benjamin equation lab: solitary waves, evolution and stability experiments"};
    app.require_subcommand(1, 1);
    Overrides o;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "Config file (sectioned key = value)");
        sub->add_option("--out", o.out, "Output directory");
        sub->add_option("--seed", o.seed, "Perturbation seed");
        sub->add_option("--gamma", o.gamma, "Dispersion parameter gamma");
        sub->add_option("--c", o.c, "Wave speed c");
        sub->add_option("--n", o.n, "Grid points (power of two)");
        sub->add_option("--L", o.L, "Box length");
        sub->add_option("--dt", o.dt, "Time step");
        sub->add_option("--T", o.T, "Final time");
        sub->add_option("--perturbation", o.perturbation, "none, even, odd or noise");
        sub->add_option("--R-list", o.radii, "Comma separated radii");
    };

    struct Command {
        const char* name;
        const char* help;
        int (*run)(const ExperimentConfig&);
    };
    const Command commands[] = {
        {"solve-wave", "Compute a solitary wave profile", cmd_solve_wave},
        {"evolve", "Evolve a (perturbed) solitary wave", cmd_evolve},
        {"stability", "Asymptotic stability experiment", cmd_stability},
        {"kdv-limit", "Distance of the profiles to the KdV soliton as gamma -> 0", cmd_kdv_limit},
        {"liouville", "Tail decay of the perturbation equation", cmd_liouville},
        {"monotonicity", "Almost-monotonicity defect sweep", cmd_monotonicity},
        {"commutator-test", "Commutator estimate ensembles", cmd_commutator},
        {"rescale", "Scaling symmetry of the profile", cmd_rescale},
    };
    std::vector<std::pair<CLI::App*, const Command*>> subs;
    for (const auto& c : commands) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        common(sub);
        subs.emplace_back(sub, &c);
        const std::string name = c.name;
        if (name == "rescale") sub->add_option("--lambda", o.lambda, "Scale factor");
        if (name == "liouville") sub->add_option("--b", o.b, "Coupling b in (0, 2^-6)");
        if (name == "monotonicity") sub->add_option("--functional", o.functional, "I_right, I_left, combo4IJ, H_right or all");
        if (name == "commutator-test") {
            sub->add_option("--samples", o.samples, "Ensemble size");
            sub->add_option("--eps", o.eps, "Exponent slack eps");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        for (const auto& [sub, cmd] : subs) {
            if (sub->parsed()) {
                const ExperimentConfig cfg = resolve(o);
                prepare(cfg);
                return cmd->run(cfg);
            }
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
