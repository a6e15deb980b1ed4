#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "benjamin/field.hpp"
#include "benjamin/solitary_wave.hpp"

namespace benjamin {

/// Smooth damping -sigma(x) (u - reference) on the outer `width` of each side
/// of the box; the reference defaults to zero.
struct Sponge {
    double strength = 1.0;
    double width = 40.0;
    std::optional<Field> reference;

    Field profile(const Grid& grid) const;
};

struct EvolutionConfig {
    double dt = 5e-4;
    double T = 1.0;
    bool dealias = true;
    std::optional<Sponge> sponge;
    int record_every = 200;  ///< steps between records
    bool keep_snapshots = false;
    /// Integrate in a frame moving with this speed; lab position = x + frame_speed * t.
    double frame_speed = 0.0;
    /// Switches the nonlinear (and sponge) term off; the step is then the exact propagator.
    bool nonlinear = true;

    void validate(const Grid& grid) const;
    /// Number of steps; dt is shrunk so that steps * dt == T.
    long steps() const;
    double effective_dt() const { return T / static_cast<double>(steps()); }
};

struct TrajectoryRecord {
    double t = 0.0;
    double mass = 0.0;
    double energy = 0.0;
    double h1norm = 0.0;
    double linf = 0.0;
    double frame_shift = 0.0;  ///< lab coordinate of the frame origin
    std::optional<Field> snapshot;
};

struct Trajectory {
    double gamma = 0.0;
    double frame_speed = 0.0;
    std::vector<TrajectoryRecord> records;
    Field final_state;
};

/// M(u) = 1/2 int u^2.
double mass(const Field& u);
/// E(u) = int 1/2 u_x^2 + gamma/2 (D^{1/2} u)^2 - u^3/6.
double energy(const Field& u, double gamma);

/// Benjamin equation u_t + u_xxx + gamma H u_xx + u u_x = 0 by ETDRK4 with
/// the exact linear propagator.  Throws BlowupDetected or ConfigError.
Trajectory evolve(const Field& u0, double gamma, const EvolutionConfig& cfg);

/// Trajectory CSV: t, mass, energy, h1norm, linf.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);
/// Snapshot file: x,u pairs.
void write_snapshot_csv(std::ostream& out, const Field& u);

/// Piecewise-linear time series, held constant outside its sample range.
class TimeSeries {
public:
    TimeSeries(std::vector<double> times, std::vector<double> values);
    static TimeSeries constant(double value);

    double operator()(double t) const;

private:
    std::vector<double> times_;
    std::vector<double> values_;
};

struct PerturbationRecord {
    double t = 0.0;
    double l2 = 0.0;
    double h1 = 0.0;
    std::vector<double> tails;  ///< int_{|x|>R} v^2 + v_x^2 for each configured R
    std::optional<Field> snapshot;
};

struct PerturbationTrajectory {
    std::vector<double> tail_radii;
    std::vector<PerturbationRecord> records;
    Field final_state;
};

/// int_{|x|>R} (v^2 + v_x^2) on the box.
double tail_norm(const Field& v, double radius);

/// Moving-frame perturbation equation
///   v_t + v_xxx + gamma H v_xx - xdot(t) v_x + a(t) Q' + (v Q)_x + (b/2)(v^2)_x = 0
/// around the solitary wave `wave`.  When `a` is empty, a(t) = c - xdot(t).
PerturbationTrajectory evolve_perturbation(const Field& v0, const SolitaryWave& wave, double b,
                                           const std::optional<TimeSeries>& a, const TimeSeries& xdot,
                                           const EvolutionConfig& cfg, std::span<const double> tail_radii);

struct Rescaled {
    Field field;
    std::optional<WaveParams> params;
};

/// lambda^2 u(lambda x) with (gamma, c) -> (|lambda| gamma, lambda^2 c).
/// Throws ResolutionLoss when the result carries energy beyond the 2/3 band.
/// Samples outside the original box are zero.
Rescaled rescale(const Field& u, double lambda, const std::optional<WaveParams>& params = std::nullopt);

/// Same map carried by the grid instead of interpolation: the result lives
/// on the period L/|lambda| box with samples lambda^2 u(sign(lambda) x_j).
Rescaled rescale_periodic(const Field& u, double lambda, const std::optional<WaveParams>& params = std::nullopt);

}  // namespace benjamin
