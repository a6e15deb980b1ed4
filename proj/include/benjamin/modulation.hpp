#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "benjamin/evolution.hpp"
#include "benjamin/field.hpp"
#include "benjamin/solitary_wave.hpp"

namespace benjamin {

struct FitOptions {
    int max_newton = 50;
    double tol = 1e-10;      ///< |F(rho)| < tol * |Q'| |u|
    double tie_tol = 1e-9;   ///< relative gap below which two scan peaks tie
};

struct TranslationFit {
    double rho = 0.0;  ///< in [-L/2, L/2)
    int newton_steps = 0;
    double functional = 0.0;  ///< F(rho) = int Q'(x) u(x + rho) dx
};

/// Translation rho with int Q'(x) u(x + rho) dx = 0: a cross-correlation scan
/// over grid shifts seeds a Newton iteration on rho.
/// Throws NonConvergence or AmbiguousFit.
TranslationFit fit_translation(const Field& u, const Field& q, const FitOptions& options = {});

struct Decomposition {
    double rho = 0.0;
    Field eta;              ///< u(. + rho) - Q
    double ortho_defect = 0.0;  ///< |int Q' eta|
    double distance_h1 = 0.0;   ///< inf_r |u - Q(. - r)|_{H1}
    double constant = 0.0;      ///< |eta|_{H1} / distance_h1 (0 when both vanish)
};

Decomposition decompose(const Field& u, const Field& q, const FitOptions& options = {});
Decomposition decompose(const Field& u, const SolitaryWave& wave, const FitOptions& options = {});

/// Shift minimizing |u - Q(. - r)|_{H1}, refined by Newton from the scan.
double h1_closest_shift(const Field& u, const Field& q);

struct MatchedSpeed {
    double c_star = 0.0;
    SolitaryWave wave;
};

/// Speed c in [c_lo, c_hi] with |Q_{gamma,c}|^2 = target, by bisection
/// (monotone branch).  Throws OutOfRange.
MatchedSpeed match_speed(double target_l2sq, double gamma, const Grid& grid, double c_lo = 0.5, double c_hi = 2.0,
                         double tol = 1e-8);

struct ModulationRecord {
    double t = 0.0;
    double rho = 0.0;      ///< lab-frame translation, unwrapped
    double rho_dot = 0.0;
    double c_star = 0.0;
    double eta_l2 = 0.0;
    double eta_h1 = 0.0;
    double ortho_defect = 0.0;
    double distance_h1 = 0.0;  ///< inf_r |u - Q(. - r)|_{H1}
    bool ok = true;
    std::string failure;
};

/// Decomposes every snapshot of the trajectory around `wave`.  The
/// translation is reported in the lab frame and unwrapped across the seam.
std::vector<ModulationRecord> track_modulation(const Trajectory& trajectory, const SolitaryWave& wave,
                                               std::optional<double> c_star = std::nullopt,
                                               const FitOptions& options = {});

/// Empirical constant max_t |rho_dot(t) - c| / |eta(t)|_{L2} over accepted
/// records (infinite if eta vanishes while rho_dot differs from c).
double rho_dot_constant(const std::vector<ModulationRecord>& records, double c);

/// Modulation CSV: t, rho, rho_dot, c_star, eta_l2, eta_h1, ortho_defect.
void write_modulation_csv(std::ostream& out, const std::vector<ModulationRecord>& records);

}  // namespace benjamin
