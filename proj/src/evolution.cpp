#include "benjamin/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "benjamin/csv.hpp"
#include "benjamin/error.hpp"
#include "benjamin/spectral.hpp"
#include "etdrk4.hpp"

namespace benjamin {

namespace {

constexpr double kBlowupThreshold = 1e6;

std::vector<std::complex<double>> dispersion_symbol(const Grid& grid, double gamma, double frame_speed) {
    std::vector<std::complex<double>> linear(grid.spectral_size());
    for (std::size_t k = 0; k < linear.size(); ++k) {
        if (grid.is_nyquist(k)) continue;
        const double xi = grid.wavenumber(k);
        linear[k] = {0.0, xi * xi * xi + gamma * xi * std::abs(xi) + frame_speed * xi};
    }
    return linear;
}

void check_blowup(std::span<const double> u, double t) {
    for (double v : u) {
        if (!std::isfinite(v) || std::abs(v) > kBlowupThreshold) {
            std::ostringstream msg;
            msg << "solution left the admissible range near t = " << t;
            throw Error(ErrorCode::BlowupDetected, msg.str());
        }
    }
}

// d/dx in the half spectrum, Nyquist dropped.
std::complex<double> ik(const Grid& grid, std::size_t k) {
    if (grid.is_nyquist(k)) return 0.0;
    return {0.0, grid.wavenumber(k)};
}

void project(const Grid& grid, Spectrum& s) {
    for (std::size_t k = grid.dealias_cutoff() + 1; k < s.size(); ++k) s[k] = 0.0;
}

TrajectoryRecord make_record(const Field& u, double gamma, double t, double frame_shift, bool keep) {
    TrajectoryRecord r;
    r.t = t;
    r.mass = mass(u);
    r.energy = energy(u, gamma);
    r.h1norm = norm(u, NormKind::H1);
    r.linf = norm(u, NormKind::Linf);
    r.frame_shift = frame_shift;
    if (keep) r.snapshot = u;
    return r;
}

}  // namespace

Field Sponge::profile(const Grid& grid) const {
    const double half = 0.5 * grid.length();
    return Field::from_function(grid, [&](double x) {
        const double d = (std::abs(x) - (half - width)) / width;
        if (d <= 0.0) return 0.0;
        const double s = std::sin(0.5 * std::numbers::pi * std::min(d, 1.0));
        return strength * s * s;
    });
}

void EvolutionConfig::validate(const Grid& grid) const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorCode::ConfigError, "dt must be positive");
    if (!(T > 0.0) || !std::isfinite(T)) throw Error(ErrorCode::ConfigError, "T must be positive");
    if (record_every < 1) throw Error(ErrorCode::ConfigError, "record_every must be >= 1");
    if (!std::isfinite(frame_speed)) throw Error(ErrorCode::ConfigError, "frame speed must be finite");
    if (sponge) {
        if (!(sponge->width > 0.0) || sponge->width >= 0.25 * grid.length()) {
            throw Error(ErrorCode::ConfigError, "sponge width must lie in (0, L/4)");
        }
        if (!(sponge->strength >= 0.0)) throw Error(ErrorCode::ConfigError, "sponge strength must be >= 0");
        if (sponge->reference && !(sponge->reference->grid() == grid)) {
            throw Error(ErrorCode::ConfigError, "sponge reference lives on a different grid");
        }
    }
}

long EvolutionConfig::steps() const {
    return std::max(1L, static_cast<long>(std::ceil(T / dt - 1e-9)));
}

double mass(const Field& u) { return 0.5 * inner(u, u); }

double energy(const Field& u, double gamma) {
    const Grid& g = u.grid();
    const double quadratic = spectral_energy(g, u.spectrum(), [gamma](double xi) {
        return 0.5 * xi * xi + 0.5 * gamma * std::abs(xi);
    });
    double cubic = 0.0;
    for (double v : u.values()) cubic += v * v * v;
    return quadratic - cubic * g.dx() / 6.0;
}

Trajectory evolve(const Field& u0, double gamma, const EvolutionConfig& cfg) {
    const Grid& grid = u0.grid();
    cfg.validate(grid);
    const long nsteps = cfg.steps();
    const double h = cfg.effective_dt();

    detail::Etdrk4 stepper(dispersion_symbol(grid, gamma, cfg.frame_speed), h);
    const std::optional<Field> sigma = cfg.sponge ? std::optional<Field>(cfg.sponge->profile(grid)) : std::nullopt;
    const Field* ref = cfg.sponge && cfg.sponge->reference ? &*cfg.sponge->reference : nullptr;

    std::vector<double> work(grid.size());
    auto nonlinear = [&](double t, const Spectrum& v, Spectrum& out) {
        const std::vector<double> u = inverse_transform(grid, v);
        check_blowup(u, t);
        for (std::size_t j = 0; j < u.size(); ++j) work[j] = u[j] * u[j];
        const Spectrum sq = forward_transform(grid, work);
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = -0.5 * ik(grid, k) * sq[k];
        if (sigma) {
            for (std::size_t j = 0; j < u.size(); ++j) work[j] = (*sigma)[j] * (u[j] - (ref ? (*ref)[j] : 0.0));
            const Spectrum damp = forward_transform(grid, work);
            for (std::size_t k = 0; k < out.size(); ++k) out[k] -= damp[k];
        }
        if (cfg.dealias) project(grid, out);
    };

    Trajectory traj{gamma, cfg.frame_speed, {}, u0};
    traj.records.push_back(make_record(u0, gamma, 0.0, 0.0, cfg.keep_snapshots));

    Spectrum v = u0.spectrum();
    for (long step = 1; step <= nsteps; ++step) {
        const double t_prev = static_cast<double>(step - 1) * h;
        if (cfg.nonlinear) {
            stepper.step(v, t_prev, nonlinear);
        } else {
            stepper.propagate(v);
        }
        if (step % cfg.record_every == 0 || step == nsteps) {
            const double t = static_cast<double>(step) * h;
            const std::vector<double> u = inverse_transform(grid, v);
            check_blowup(u, t);
            traj.records.push_back(
                make_record(Field::from_spectrum(grid, v), gamma, t, cfg.frame_speed * t, cfg.keep_snapshots));
        }
    }
    traj.final_state = Field::from_spectrum(grid, v);
    return traj;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
    CsvWriter csv(out, {"t", "mass", "energy", "h1norm", "linf"});
    for (const auto& r : trajectory.records) csv.row({r.t, r.mass, r.energy, r.h1norm, r.linf});
}

void write_snapshot_csv(std::ostream& out, const Field& u) {
    CsvWriter csv(out, {"x", "u"});
    for (std::size_t j = 0; j < u.size(); ++j) csv.row({u.grid().x(j), u[j]});
}

TimeSeries::TimeSeries(std::vector<double> times, std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
    if (times_.empty() || times_.size() != values_.size()) {
        throw Error(ErrorCode::InvalidArgument, "time series needs matching, non-empty samples");
    }
    for (std::size_t i = 1; i < times_.size(); ++i) {
        if (!(times_[i] > times_[i - 1])) throw Error(ErrorCode::InvalidArgument, "time series must be increasing");
    }
}

TimeSeries TimeSeries::constant(double value) { return TimeSeries({0.0}, {value}); }

double TimeSeries::operator()(double t) const {
    if (t <= times_.front()) return values_.front();
    if (t >= times_.back()) return values_.back();
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - times_.begin());
    const double w = (t - times_[i - 1]) / (times_[i] - times_[i - 1]);
    return (1.0 - w) * values_[i - 1] + w * values_[i];
}

double tail_norm(const Field& v, double radius) {
    const Field vx = derivative(v, 1);
    const Grid& g = v.grid();
    double s = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        if (std::abs(g.x(j)) > radius) s += v[j] * v[j] + vx[j] * vx[j];
    }
    return s * g.dx();
}

PerturbationTrajectory evolve_perturbation(const Field& v0, const SolitaryWave& wave, double b,
                                           const std::optional<TimeSeries>& a, const TimeSeries& xdot,
                                           const EvolutionConfig& cfg, std::span<const double> tail_radii) {
    const Grid& grid = v0.grid();
    if (!(wave.profile.grid() == grid)) throw Error(ErrorCode::InvalidArgument, "wave and data live on different grids");
    if (!(b > 0.0 && b < 1.0 / 64.0)) throw Error(ErrorCode::InvalidArgument, "coupling b must lie in (0, 2^-6)");
    cfg.validate(grid);

    const double gamma = wave.params.gamma;
    const double c = wave.params.c;
    const double xdot0 = xdot(0.0);
    const long nsteps = cfg.steps();
    const double h = cfg.effective_dt();

    detail::Etdrk4 stepper(dispersion_symbol(grid, gamma, xdot0), h);
    const std::optional<Field> sigma = cfg.sponge ? std::optional<Field>(cfg.sponge->profile(grid)) : std::nullopt;
    const Spectrum dq_hat = derivative(wave.profile, 1).spectrum();
    const std::span<const double> q = wave.profile.values();

    std::vector<double> work(grid.size());
    auto nonlinear = [&](double t, const Spectrum& w, Spectrum& out) {
        const std::vector<double> v = inverse_transform(grid, w);
        check_blowup(v, t);
        for (std::size_t j = 0; j < v.size(); ++j) work[j] = v[j] * (q[j] + 0.5 * b * v[j]);
        const Spectrum flux = forward_transform(grid, work);
        const double drift = xdot(t) - xdot0;
        const double forcing = a ? (*a)(t) : c - xdot(t);
        for (std::size_t k = 0; k < out.size(); ++k) {
            out[k] = ik(grid, k) * (drift * w[k] - flux[k]) - forcing * dq_hat[k];
        }
        if (sigma) {
            for (std::size_t j = 0; j < v.size(); ++j) work[j] = (*sigma)[j] * v[j];
            const Spectrum damp = forward_transform(grid, work);
            for (std::size_t k = 0; k < out.size(); ++k) out[k] -= damp[k];
        }
        if (cfg.dealias) project(grid, out);
    };

    PerturbationTrajectory traj{{tail_radii.begin(), tail_radii.end()}, {}, v0};
    auto record = [&](const Field& v, double t) {
        PerturbationRecord r;
        r.t = t;
        r.l2 = norm(v, NormKind::L2);
        r.h1 = norm(v, NormKind::H1);
        for (double radius : tail_radii) r.tails.push_back(tail_norm(v, radius));
        if (cfg.keep_snapshots) r.snapshot = v;
        traj.records.push_back(std::move(r));
    };
    record(v0, 0.0);

    Spectrum w = v0.spectrum();
    for (long step = 1; step <= nsteps; ++step) {
        const double t_prev = static_cast<double>(step - 1) * h;
        if (cfg.nonlinear) {
            stepper.step(w, t_prev, nonlinear);
        } else {
            stepper.propagate(w);
        }
        if (step % cfg.record_every == 0 || step == nsteps) {
            const double t = static_cast<double>(step) * h;
            check_blowup(inverse_transform(grid, w), t);
            record(Field::from_spectrum(grid, w), t);
        }
    }
    traj.final_state = Field::from_spectrum(grid, w);
    return traj;
}

Rescaled rescale(const Field& u, double lambda, const std::optional<WaveParams>& params) {
    if (lambda == 0.0 || !std::isfinite(lambda)) throw Error(ErrorCode::InvalidArgument, "lambda must be non-zero");
    const Grid& grid = u.grid();
    const double half = 0.5 * grid.length();

    std::vector<double> pts(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) pts[j] = lambda * grid.x(j);
    std::vector<double> vals = interpolate(u, pts);
    for (std::size_t j = 0; j < vals.size(); ++j) {
        vals[j] = std::abs(pts[j]) <= half ? lambda * lambda * vals[j] : 0.0;
    }
    Field out(grid, std::move(vals));

    // Content of u that the rescaled window no longer sees.
    double lost = 0.0;
    double total = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        total += u[j] * u[j];
        if (std::abs(grid.x(j)) > std::abs(lambda) * half) lost += u[j] * u[j];
    }
    const double high = spectral_energy(grid, out.spectrum(), [&](double xi) {
        return xi > grid.wavenumber(grid.dealias_cutoff()) ? 1.0 : 0.0;
    });
    const double all = spectral_energy(grid, out.spectrum(), [](double) { return 1.0; });
    constexpr double kTolerance = 1e-10;
    if ((all > 0.0 && high > kTolerance * all) || (total > 0.0 && lost > kTolerance * total)) {
        std::ostringstream msg;
        msg << "rescaling by " << lambda << " is not resolved on the grid";
        throw Error(ErrorCode::ResolutionLoss, msg.str());
    }

    Rescaled r{std::move(out), std::nullopt};
    if (params) r.params = WaveParams{std::abs(lambda) * params->gamma, lambda * lambda * params->c};
    return r;
}

Rescaled rescale_periodic(const Field& u, double lambda, const std::optional<WaveParams>& params) {
    if (lambda == 0.0 || !std::isfinite(lambda)) throw Error(ErrorCode::InvalidArgument, "lambda must be non-zero");
    const Grid& grid = u.grid();
    const Grid scaled(grid.size(), grid.length() / std::abs(lambda));
    const Field source = lambda > 0.0 ? u : u.reflected();
    std::vector<double> vals(source.values().begin(), source.values().end());
    for (double& v : vals) v *= lambda * lambda;
    Rescaled r{Field(scaled, std::move(vals)), std::nullopt};
    if (params) r.params = WaveParams{std::abs(lambda) * params->gamma, lambda * lambda * params->c};
    return r;
}

}  // namespace benjamin
