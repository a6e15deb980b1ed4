#include "benjamin/solitary_wave.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "benjamin/csv.hpp"
#include "benjamin/error.hpp"
#include "benjamin/spectral.hpp"

namespace benjamin {

namespace {

double half_weight(const Grid& grid, std::size_t k) {
    return (k == 0 || grid.is_nyquist(k)) ? 1.0 : 2.0;
}

// Profile-operator symbol on the half spectrum; the Hilbert part vanishes at
// the Nyquist index, matching hilbert().
std::vector<double> profile_symbol(const WaveParams& p, const Grid& grid) {
    std::vector<double> m(grid.spectral_size());
    for (std::size_t k = 0; k < m.size(); ++k) {
        const double xi = grid.wavenumber(k);
        m[k] = grid.is_nyquist(k) ? p.c + xi * xi : p.symbol(xi);
    }
    return m;
}

Field symmetrize(const Field& u) {
    const std::size_t n = u.size();
    std::vector<double> s(n);
    for (std::size_t j = 0; j < n; ++j) s[j] = 0.5 * (u[j] + u[(n - j) % n]);
    return Field(u.grid(), std::move(s));
}

// Half of the dealiased square, in spectral space.
Spectrum half_square_hat(const Field& u) {
    Spectrum s = dealias(u.grid(), forward_transform(u.grid(), u.times(u).values()));
    for (auto& v : s) v *= 0.5;
    return s;
}

}  // namespace

double WaveParams::symbol(double xi) const { return c + xi * xi + gamma * std::abs(xi); }

void WaveParams::validate() const {
    if (!std::isfinite(gamma) || !std::isfinite(c)) throw Error(ErrorCode::InvalidArgument, "non-finite wave parameters");
    if (c <= 0.0) {
        throw Error(ErrorCode::InvalidArgument, "wave speed must be positive");
    }
    if (gamma < 0.0 && c <= 0.25 * gamma * gamma) {
        std::ostringstream msg;
        msg << "symbol c + xi^2 + gamma|xi| is not positive: c = " << c << " <= gamma^2/4 = " << 0.25 * gamma * gamma;
        throw Error(ErrorCode::SymbolDegenerate, msg.str());
    }
}

void WaveParams::validate_on(const Grid& grid) const {
    validate();
    for (std::size_t k = 0; k < grid.spectral_size(); ++k) {
        if (symbol(grid.wavenumber(k)) <= 0.0) {
            throw Error(ErrorCode::SymbolDegenerate, "sampled symbol is not positive on the grid");
        }
    }
}

Field kdv_soliton(double c, const Grid& grid) {
    if (!(c > 0.0)) throw Error(ErrorCode::InvalidArgument, "KdV soliton speed must be positive");
    const double k = 0.5 * std::sqrt(c);
    return Field::from_function(grid, [c, k](double x) {
        const double s = 1.0 / std::cosh(k * x);
        return 3.0 * c * s * s;
    });
}

double eqq_residual(const Field& profile, const WaveParams& params) {
    const Grid& grid = profile.grid();
    const auto m = profile_symbol(params, grid);
    const Spectrum u_hat = profile.spectrum();
    const Spectrum n_hat = half_square_hat(profile);
    Spectrum r(u_hat.size());
    for (std::size_t k = 0; k < r.size(); ++k) r[k] = m[k] * u_hat[k] - n_hat[k];
    return norm(Field::from_spectrum(grid, std::move(r)), NormKind::Linf);
}

SolitaryWave petviashvili_solve(const WaveParams& params, const Grid& grid, const std::optional<Field>& init,
                                const PetviashviliOptions& options) {
    params.validate_on(grid);
    Field phi = init ? *init : kdv_soliton(params.c, grid);
    if (!(phi.grid() == grid)) throw Error(ErrorCode::InvalidArgument, "initial guess lives on another grid");
    phi = symmetrize(phi);

    const auto m = profile_symbol(params, grid);
    double factor = 1.0;
    for (int it = 0; it <= options.max_iter; ++it) {
        const Spectrum u_hat = phi.spectrum();
        const Spectrum n_hat = half_square_hat(phi);

        Spectrum defect(u_hat.size());
        double num = 0.0;
        double den = 0.0;
        for (std::size_t k = 0; k < u_hat.size(); ++k) {
            defect[k] = m[k] * u_hat[k] - n_hat[k];
            const double w = half_weight(grid, k);
            num += w * m[k] * std::norm(u_hat[k]);
            den += w * (n_hat[k] * std::conj(u_hat[k])).real();
        }
        const double residual = norm(Field::from_spectrum(grid, std::move(defect)), NormKind::Linf);
        if (!std::isfinite(residual)) break;
        if (residual < options.tol) {
            if (den > 0.0) factor = num / den;
            SolitaryWave wave{params, phi, residual, it, factor, 0.0};
            wave.decay_constant = decay_constant(phi);
            return wave;
        }
        if (!(den > 0.0) || !std::isfinite(num / den)) break;
        factor = num / den;

        Spectrum next(u_hat.size());
        const double gain = factor * factor;
        for (std::size_t k = 0; k < next.size(); ++k) next[k] = gain * n_hat[k] / m[k];
        phi = symmetrize(Field::from_spectrum(grid, std::move(next)));
        if (norm(phi, NormKind::Linf) > 1e8) break;
    }
    std::ostringstream msg;
    msg << "Petviashvili iteration did not reach residual " << options.tol << " within " << options.max_iter
        << " iterations (gamma = " << params.gamma << ", c = " << params.c << ")";
    throw Error(ErrorCode::NonConvergence, msg.str());
}

int default_continuation_steps(double gamma_target) {
    return std::max(10, static_cast<int>(std::ceil(std::abs(gamma_target) / 0.02)));
}

std::vector<SolitaryWave> trace_branch(double gamma_target, double c, const Grid& grid, int n_steps,
                                       const PetviashviliOptions& options) {
    if (n_steps <= 0) n_steps = default_continuation_steps(gamma_target);
    std::vector<SolitaryWave> steps;
    steps.push_back(petviashvili_solve({0.0, c}, grid, std::nullopt, options));
    if (gamma_target == 0.0) return steps;

    for (int i = 1; i <= n_steps; ++i) {
        const double g = gamma_target * static_cast<double>(i) / static_cast<double>(n_steps);
        try {
            steps.push_back(petviashvili_solve({g, c}, grid, steps.back().profile, options));
        } catch (const Error& e) {
            std::ostringstream msg;
            msg << "continuation failed at gamma = " << g << ": " << e.what();
            throw Error(e.code(), msg.str());
        }
    }
    return steps;
}

SolitaryWave continue_branch(double gamma_target, double c, const Grid& grid, int n_steps,
                             const PetviashviliOptions& options) {
    return trace_branch(gamma_target, c, grid, n_steps, options).back();
}

SolitaryWave solve_wave(const WaveParams& params, const Grid& grid, const std::optional<Field>& init,
                        const PetviashviliOptions& options) {
    try {
        return petviashvili_solve(params, grid, init, options);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NonConvergence || params.gamma == 0.0) throw;
    }
    return continue_branch(params.gamma, params.c, grid, 0, options);
}

SpeedDerivative dc_derivative(const WaveParams& params, const Grid& grid, double h, const PetviashviliOptions& options) {
    if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "finite-difference step must be positive");
    const SolitaryWave center = solve_wave(params, grid, std::nullopt, options);
    auto at = [&](double dc) {
        WaveParams p = params;
        p.c += dc;
        return solve_wave(p, grid, center.profile, options).profile;
    };
    auto l2sq = [](const Field& q) { return inner(q, q); };

    const Field plus = at(h);
    const Field minus = at(-h);
    const double d_h = (l2sq(plus) - l2sq(minus)) / (2.0 * h);
    const double d_2h = (l2sq(at(2.0 * h)) - l2sq(at(-2.0 * h))) / (4.0 * h);
    return {(plus - minus) * (1.0 / (2.0 * h)), d_h, std::abs(d_h - d_2h) / 3.0};
}

double decay_constant(const Field& profile) {
    const Grid& g = profile.grid();
    const Field d1 = derivative(profile, 1);
    const Field d2 = derivative(profile, 2);
    const double lo = g.length() / 8.0;
    const double hi = 3.0 * g.length() / 8.0;
    double best = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double ax = std::abs(g.x(j));
        if (ax < lo || ax > hi) continue;
        const double v = ax * ax * std::abs(profile[j]) + ax * ax * ax * (std::abs(d1[j]) + std::abs(d2[j]));
        best = std::max(best, v);
    }
    return best;
}

double decay_constant(const SolitaryWave& wave) { return decay_constant(wave.profile); }

Field linearized_kdv_apply(const Field& psi) {
    const Field q = kdv_soliton(1.0, psi.grid());
    return psi - derivative(psi, 2) - q.times(psi);
}

void write_profile_csv(std::ostream& out, const Field& profile) {
    CsvWriter csv(out, {"x", "Q"});
    for (std::size_t j = 0; j < profile.size(); ++j) csv.row({profile.grid().x(j), profile[j]});
}

}  // namespace benjamin
