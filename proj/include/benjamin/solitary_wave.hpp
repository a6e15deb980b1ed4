#pragma once

#include <optional>
#include <ostream>
#include <vector>

#include "benjamin/field.hpp"

namespace benjamin {

/// Parameters (gamma, c) of the equation and of a solitary wave.
struct WaveParams {
    double gamma = 0.0;
    double c = 1.0;

    /// Linear symbol of the profile operator, m(xi) = c + xi^2 + gamma |xi|.
    double symbol(double xi) const;
    /// Throws SymbolDegenerate (or InvalidArgument for c <= 0) when m is not
    /// positive on the real line.
    void validate() const;
    /// Same, and additionally checks the sampled symbol on the grid.
    void validate_on(const Grid& grid) const;
};

struct SolitaryWave {
    WaveParams params;
    Field profile;
    double residual = 0.0;          ///< sup norm of the profile-equation defect
    int iterations = 0;
    double stabilizing_factor = 1.0;  ///< Petviashvili factor at exit, tends to 1
    double decay_constant = 0.0;      ///< x^2|Q| + |x|^3(|Q'|+|Q''|) on the far field
};

struct PetviashviliOptions {
    double tol = 1e-10;
    int max_iter = 3000;
};

/// 3c sech^2(sqrt(c) x / 2) sampled on the grid.
Field kdv_soliton(double c, const Grid& grid);

/// Petviashvili iteration for c Q - Q'' - gamma H Q' - Q^2/2 = 0 with exponent 2.
/// The default seed is the KdV soliton of the same speed.
SolitaryWave petviashvili_solve(const WaveParams& params, const Grid& grid,
                                const std::optional<Field>& init = std::nullopt,
                                const PetviashviliOptions& options = {});

/// Default homotopy length: max(10, ceil(|gamma|/0.02)).
int default_continuation_steps(double gamma_target);

/// Homotopy in gamma from 0 to gamma_target at fixed c; returns every step.
std::vector<SolitaryWave> trace_branch(double gamma_target, double c, const Grid& grid, int n_steps = 0,
                                       const PetviashviliOptions& options = {});
SolitaryWave continue_branch(double gamma_target, double c, const Grid& grid, int n_steps = 0,
                             const PetviashviliOptions& options = {});

/// Direct solve from `init` (KdV seed by default), falling back to gamma
/// continuation when the direct iteration does not converge.
SolitaryWave solve_wave(const WaveParams& params, const Grid& grid,
                        const std::optional<Field>& init = std::nullopt,
                        const PetviashviliOptions& options = {});

/// sup |c u - u'' - gamma H u' - P(u^2)/2| with the dealiased square.
double eqq_residual(const Field& profile, const WaveParams& params);

struct SpeedDerivative {
    Field dq_dc;
    double dl2_dc = 0.0;
    double richardson_error = 0.0;
};

/// Centered difference in c of the profile and of its squared L2 norm.
SpeedDerivative dc_derivative(const WaveParams& params, const Grid& grid, double h = 1e-3,
                              const PetviashviliOptions& options = {});

/// sup over |x| in [L/8, 3L/8] of x^2|Q| + |x|^3 (|Q'| + |Q''|).
double decay_constant(const Field& profile);
double decay_constant(const SolitaryWave& wave);

/// psi - psi'' - Q_KdV psi, the KdV linearization at the speed-1 soliton.
Field linearized_kdv_apply(const Field& psi);

/// Two-column CSV "x,Q" with 17 significant digits.
void write_profile_csv(std::ostream& out, const Field& profile);

}  // namespace benjamin
