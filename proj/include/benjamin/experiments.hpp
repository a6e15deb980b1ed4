#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "benjamin/config.hpp"
#include "benjamin/modulation.hpp"
#include "benjamin/monotonicity.hpp"

namespace benjamin {

/// Flat key = value results, written after the resolved config and the
/// convention block.
class Report {
public:
    explicit Report(std::string title) : title_(std::move(title)) {}

    void add(const std::string& key, double value);
    void add(const std::string& key, const std::string& value);
    void add_flag(const std::string& key, bool value);

    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
    void write(std::ostream& out, const ExperimentConfig& cfg) const;

private:
    std::string title_;
    std::vector<std::pair<std::string, std::string>> entries_;
};

/// Sign and normalization conventions used throughout.
void write_conventions(std::ostream& out);

struct StabilityRow {
    double t = 0.0;
    double rho = 0.0;        ///< lab position x(t)
    double xdot = 0.0;
    double err_right = 0.0;  ///< |u - Q_{c*}(. - x(t))|_{H1(x > c t/2)}
    double eta_l2 = 0.0;
    double distance_h1 = 0.0;
    double ortho_ratio = 0.0;  ///< |int Q' eta| / (|Q'| |eta|)
};

struct StabilityReport {
    double gamma = 0.0;
    double c = 0.0;
    double alpha2 = 0.0;  ///< mean over the final third of int_{x > c t/2} u^2
    double c_star = 0.0;
    std::vector<StabilityRow> rows;
    std::vector<ModulationRecord> modulation;
    double err_mid = 0.0;     ///< mean error over t in [0.45 T, 0.55 T]
    double err_end = 0.0;     ///< mean error over t >= 0.9 T
    double xdot_final = 0.0;  ///< slope of x(t) over the final tenth
    double proximity_sup = 0.0;
    double c_fit = 0.0;       ///< max_t |xdot - c*| / |eta|_{L2}
    double max_ortho_ratio = 0.0;
    bool error_decreasing = false;
    bool speed_matched = false;
    bool orbit_lost = false;
};

/// Perturbed solitary wave run with modulation tracking and mass matching.
/// Orbit loss is flagged in the report, not thrown.
StabilityReport run_stability(const ExperimentConfig& cfg);
Report summarize(const StabilityReport& report);
/// Columns t, rho, xdot, err_right, eta_l2, distance_h1, ortho_ratio.
void write_stability_csv(std::ostream& out, const StabilityReport& report);

struct KdvLimitRow {
    double gamma = 0.0;
    double diff_h1 = 0.0;
    double diff_h2 = 0.0;
};

struct KdvLimitReport {
    double c = 1.0;
    double zero_entry = 0.0;  ///< |Q_{0,c} - Q_KdV|_{H2}
    std::vector<KdvLimitRow> rows;
    std::optional<double> order_h1;
    std::optional<double> order_h2;
    bool monotone = false;
};

KdvLimitReport run_kdv_limit(const ExperimentConfig& cfg);
Report summarize(const KdvLimitReport& report);
void write_kdv_limit_csv(std::ostream& out, const KdvLimitReport& report);

struct LiouvilleReport {
    std::vector<double> radii;
    std::vector<double> times;
    std::vector<std::vector<double>> tails;  ///< [record][R]
    double c_fit = 0.0;                      ///< max over t and R of tail R^{1/4}
    double c_final = 0.0;                    ///< same at the final time
    std::optional<double> slope_final;
    double eta_local_initial = 0.0;          ///< nonlinear flow, |eta|_{L2(|x| < max R)}
    double eta_local_final = 0.0;
    bool eta_decays = false;
};

/// Perturbation equation with xdot = c and a = 0 from the configured data,
/// plus a nonlinear run from Q + the same data for the eta evidence.
LiouvilleReport run_liouville_probe(const ExperimentConfig& cfg, bool with_nonlinear_evidence = true);
Report summarize(const LiouvilleReport& report);
/// Columns t, tail_R... for each configured R.
void write_liouville_csv(std::ostream& out, const LiouvilleReport& report);

struct MonotonicityRun {
    Trajectory trajectory;
    std::vector<SweepReport> sweeps;
};

/// Perturbed solitary wave in the comoving frame; sweeps the listed functionals.
MonotonicityRun run_monotonicity(const ExperimentConfig& cfg, const std::vector<SweepFunctional>& which);

struct CommutatorReport {
    std::vector<double> ratios;      ///< ensemble ratios of the first estimate
    double max_ratio = 0.0;
    double max_ratio_fine = 0.0;     ///< same ensemble on the doubled grid
    double scaling_defect = 0.0;     ///< max relative change of the ratio under f -> lambda f
    std::vector<double> derivative_ratios;
    double max_derivative_ratio = 0.0;
    std::vector<double> radii;
    std::vector<double> operator_norms;  ///< sup_u |d/dx([H, Psi_R] u_x)| / |u|
    std::optional<double> slope;
    double target_slope = 0.0;           ///< -(2 - eps) 3/4
};

CommutatorReport run_commutator_test(const ExperimentConfig& cfg);
Report summarize(const CommutatorReport& report);

}  // namespace benjamin
