#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "benjamin/evolution.hpp"
#include "benjamin/field.hpp"

namespace benjamin {

/// Smooth step: chi' = c exp(-1/(x(1-x))) on (0,1), chi = 0 left of 0, 1 right of 1.
class Cutoff {
public:
    double operator()(double x) const;
    double derivative(double x) const;
    /// Normalization c of the bump.
    double normalization() const { return norm_; }

private:
    friend const Cutoff& make_chi();
    Cutoff();

    double norm_ = 0.0;
    double h_ = 0.0;
    std::vector<double> table_;  ///< chi at the nodes k h of [0, 1/2]; panels integrated on demand
};

/// Shared tabulated cutoff.
const Cutoff& make_chi();

enum class Side { Right, Left };

struct CutoffRecord {
    double R = 10.0;
    double vartheta = 0.5;
    double t0 = 0.0;
    double x0 = 0.0;
    double theta = 0.75;
    Side side = Side::Right;

    /// Throws InvalidArgument.
    void validate() const;
    /// Left edge of the transition at time t.
    double center(double t) const;
    double width(double t) const;
};

/// Psi(t, x) = chi((x - center(t)) / width(t)).
double eval_psi(const CutoffRecord& cut, double t, double x);
/// Psi at the lab positions x_j + frame_shift.
Field psi_on_grid(const CutoffRecord& cut, double t, const Grid& grid, double frame_shift = 0.0);

/// 1/2 int u^2 Psi.
double functional_I(const Field& u, const CutoffRecord& cut, double t, double frame_shift = 0.0);
/// int (1/2 u_x^2 - gamma/2 u H u_x - u^3/6) Psi.
double functional_J(const Field& u, const CutoffRecord& cut, double gamma, double t, double frame_shift = 0.0);

/// int (energy density + theta0 u^2) w with w = chi((x - xshift + 2R)/R^{3/4}) on
/// the right and 1 - w on the left.
double functional_H(const Field& u, double R, Side side, double theta0, double gamma, double xshift = 0.0);

struct FunctionalRecord {
    double t = 0.0;
    double R = 0.0;
    double I_val = 0.0;
    double J_val = 0.0;
    double H_right = 0.0;
    double H_left = 0.0;
    double theta0 = 4.0;
    double mass = 0.0;
    double energy = 0.0;

    /// H_right + H_left - (E + 2 theta0 M).
    double partition_defect() const { return H_right + H_left - (energy + 2.0 * theta0 * mass); }
};

FunctionalRecord evaluate_functionals(const Field& u, const CutoffRecord& cut, double gamma, double t,
                                      double theta0, double xshift, double frame_shift = 0.0);

enum class SweepFunctional { IRight, ILeft, Combo4IJ, HRight };
const char* to_string(SweepFunctional which);
/// Throws InvalidArgument for unknown names.
SweepFunctional parse_sweep_functional(const std::string& name);

struct SweepOptions {
    double vartheta = 0.5;
    double theta = 0.75;
    std::optional<double> theta0;      ///< default 4 + sup_t |u(t)|_{H1}
    std::optional<double> max_span;    ///< only pairs with |t - t0| <= max_span
    double loc_threshold = 1.0 / 64.0;
};

struct SweepRow {
    double R = 0.0;
    double t = 0.0;
    double t0 = 0.0;
    double value = 0.0;
    double defect = 0.0;
};

struct SweepReport {
    SweepFunctional which = SweepFunctional::IRight;
    std::vector<double> radii;
    std::vector<double> max_defect;   ///< per R, maximum over (t, t0) pairs
    std::vector<SweepRow> rows;
    std::optional<double> slope;      ///< least-squares slope of log defect+ against log R
    double k_min = 0.0;               ///< max_R defect+ R^{1/4}
    double theta0 = 0.0;
    double min_xdot = 0.0;
    double r0 = 0.0;                  ///< smallest R0 with |u| <= loc_threshold outside |x - x(t)| > R0
    std::vector<std::string> warnings;
};

/// Defects of the chosen functional over all record pairs:
///   I_right, combo: F(t0) - F(t) for t <= t0;
///   I_left, H_right: F(t) - F(t0) for t >= t0.
/// x_of_t is the lab position of the wave.  Hypothesis violations are
/// reported as warnings.
SweepReport monotonicity_sweep(const Trajectory& trajectory, const TimeSeries& x_of_t, const std::vector<double>& radii,
                               SweepFunctional which, const SweepOptions& options = {});

/// Sweep CSV: R, t, t0, functional, value, defect.
void write_sweep_csv(std::ostream& out, const SweepReport& report);
/// Flat key=value summary.
void write_sweep_summary(std::ostream& out, const SweepReport& report);

/// Least-squares slope of log y against log x over entries with y > 0.
std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct CommutatorRatios {
    double hilbert_term = 0.0;     ///< |[H, f] u_x|
    double derivative_term = 0.0;  ///< |[H d/dx, f] u|
    double scale = 0.0;            ///< |f'|_inf |u|
    double ratio = 0.0;
};

/// Throws DegenerateInput when the scale vanishes but the commutators do not.
CommutatorRatios commutator_defect(const Field& f, const Field& u);

struct CommutatorDerivative {
    double left = 0.0;   ///< |d/dx([H, f] u_x)|
    double right = 0.0;  ///< (|D^{2-eps} f|_inf + |D^{2+eps} f|_inf) |u|
    double ratio = 0.0;
};

CommutatorDerivative commutator_derivative_defect(const Field& f, const Field& u, double eps = 0.1);

/// sup_u |d/dx([H, f] u_x)| / |u| by power iteration on the square of the
/// self-adjoint map u -> d/dx [H, f] d/dx u.
double commutator_operator_norm(const Field& f, int max_iter = 500, double tol = 1e-9);

/// Periodic plateau chi((x - a)/w) chi((b - x)/w) with w = R^theta.
Field psi_plateau(const Grid& grid, double R, double a, double b, double theta = 0.75);

}  // namespace benjamin
