#include "benjamin/modulation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "benjamin/csv.hpp"
#include "benjamin/error.hpp"
#include "benjamin/spectral.hpp"
#include "parallel.hpp"

namespace benjamin {

namespace {

// C(s) = <u, Q(. - s)>_w = int Q(x) u(x + s) dx in the inner product with
// spectral weight w, evaluated exactly for the trigonometric interpolants.
class Correlation {
public:
    Correlation(const Field& u, const Field& q, const std::function<double(double)>& weight)
        : grid_(u.grid()), product_(grid_.spectral_size()) {
        const Spectrum uh = u.spectrum();
        const Spectrum qh = q.spectrum();
        for (std::size_t k = 0; k < product_.size(); ++k) {
            product_[k] = weight(grid_.wavenumber(k)) * std::conj(qh[k]) * uh[k];
        }
    }

    /// Returns the order-th derivative of C at s (order 0, 1 or 2).
    double derivative(double s, int order) const {
        double acc = 0.0;
        const std::size_t nyq = grid_.size() / 2;
        for (std::size_t k = 0; k < nyq; ++k) {
            const double xi = grid_.wavenumber(k);
            std::complex<double> term = product_[k] * std::polar(1.0, xi * s);
            if (order == 1) term *= std::complex<double>(0.0, xi);
            if (order == 2) term *= -xi * xi;
            acc += (k == 0 ? 1.0 : 2.0) * term.real();
        }
        if (order != 1) {
            const double xi = grid_.wavenumber(nyq);
            const double f = order == 2 ? -xi * xi : 1.0;
            acc += f * product_[nyq].real() * std::cos(xi * s);
        }
        const double n = static_cast<double>(grid_.size());
        return acc * grid_.length() / (n * n);
    }

    /// C at every grid shift j*dx, wrapped into [-L/2, L/2).
    std::vector<double> scan() const { 
        std::vector<double> c = inverse_transform(grid_, product_);
        for (double& v : c) v *= static_cast<double>(grid_.size()) * grid_.length() /
                                  (static_cast<double>(grid_.size()) * static_cast<double>(grid_.size()));
        return c;
    }

    double shift_of(std::size_t j) const {
        const double s = static_cast<double>(j) * grid_.dx();
        return j < grid_.size() / 2 ? s : s - grid_.length();
    }

    const Grid& grid() const { return grid_; }

private:
    Grid grid_;
    Spectrum product_;
};

// Global maximum of the scan, rejecting a runner-up peak of equal height.
std::size_t best_peak(const std::vector<double>& c, double tie_tol) {
    const std::size_t n = c.size();
    std::vector<std::size_t> peaks;
    for (std::size_t j = 0; j < n; ++j) {
        const double left = c[(j + n - 1) % n];
        const double right = c[(j + 1) % n];
        if (c[j] > left && c[j] >= right) peaks.push_back(j);
    }
    if (peaks.empty()) throw Error(ErrorCode::AmbiguousFit, "cross-correlation has no isolated maximum");
    std::sort(peaks.begin(), peaks.end(), [&](std::size_t a, std::size_t b) { return c[a] > c[b]; });
    double scale = 0.0;
    for (double v : c) scale = std::max(scale, std::abs(v));
    if (peaks.size() > 1 && c[peaks[0]] - c[peaks[1]] <= tie_tol * scale) {
        std::ostringstream msg;
        msg << "two cross-correlation peaks tie (" << c[peaks[0]] << " vs " << c[peaks[1]] << ")";
        throw Error(ErrorCode::AmbiguousFit, msg.str());
    }
    return peaks[0];
}

double wrap(double s, double length) {
    double r = std::remainder(s, length);
    if (r >= 0.5 * length) r -= length;
    return r;
}

struct PeakResult {
    double s;
    int steps;
    double slope;  // C'(s) at exit
};

PeakResult refine_peak(const Correlation& corr, double seed, double tol, int max_newton) {
    double s = seed;
    for (int it = 1; it <= max_newton; ++it) {
        const double d1 = corr.derivative(s, 1);
        const double d2 = corr.derivative(s, 2);
        if (!(d2 < 0.0)) break;
        const double ds = d1 / d2;
        s -= ds;
        if (std::abs(ds) < 1e-13 * std::max(1.0, std::abs(s))) {
            const double final_d1 = corr.derivative(s, 1);
            if (std::abs(final_d1) < tol) return {s, it, final_d1};
        }
    }
    const double d1 = corr.derivative(s, 1);
    if (std::abs(d1) < tol) return {s, max_newton, d1};
    std::ostringstream msg;
    msg << "Newton refinement of the translation failed (|F| = " << std::abs(d1) << ")";
    throw Error(ErrorCode::NonConvergence, msg.str());
}

}  // namespace

TranslationFit fit_translation(const Field& u, const Field& q, const FitOptions& options) {
    if (!(u.grid() == q.grid())) throw Error(ErrorCode::InvalidArgument, "fields live on different grids");
    const Correlation corr(u, q, [](double) { return 1.0; });
    const std::size_t j = best_peak(corr.scan(), options.tie_tol);

    const double scale = norm(derivative(q, 1), NormKind::L2) * norm(u, NormKind::L2);
    const PeakResult peak = refine_peak(corr, corr.shift_of(j), options.tol * scale, options.max_newton);
    // F(s) = int Q'(x) u(x + s) dx = -C'(s)
    return {wrap(peak.s, u.grid().length()), peak.steps, -peak.slope};
}

double h1_closest_shift(const Field& u, const Field& q) {
    const Correlation corr(u, q, [](double xi) { return 1.0 + xi * xi; });
    const std::size_t j = best_peak(corr.scan(), 1e-9);
    const double scale = norm(q, NormKind::H1) * norm(u, NormKind::H1);
    return wrap(refine_peak(corr, corr.shift_of(j), 1e-10 * scale + 1e-300, 50).s, u.grid().length());
}

Decomposition decompose(const Field& u, const Field& q, const FitOptions& options) {
    const TranslationFit fit = fit_translation(u, q, options);
    Field eta = shift(u, -fit.rho) - q;
    const double defect = std::abs(inner(derivative(q, 1), eta));
    const double r = h1_closest_shift(u, q);
    const double dist = norm(u - shift(q, r), NormKind::H1);
    const double eta_h1 = norm(eta, NormKind::H1);
    const double constant = dist > 0.0 ? eta_h1 / dist : 0.0;
    return {fit.rho, std::move(eta), defect, dist, constant};
}

Decomposition decompose(const Field& u, const SolitaryWave& wave, const FitOptions& options) {
    return decompose(u, wave.profile, options);
}

MatchedSpeed match_speed(double target_l2sq, double gamma, const Grid& grid, double c_lo, double c_hi, double tol) {
    if (!(c_lo > 0.0 && c_hi > c_lo)) throw Error(ErrorCode::InvalidArgument, "invalid speed bracket");
    auto solve = [&](double c, const std::optional<Field>& seed) { return solve_wave({gamma, c}, grid, seed); };
    auto l2sq = [](const SolitaryWave& w) { return inner(w.profile, w.profile); };

    SolitaryWave lo = solve(c_lo, std::nullopt);
    SolitaryWave hi = solve(c_hi, std::nullopt);
    const double f_lo = l2sq(lo) - target_l2sq;
    const double f_hi = l2sq(hi) - target_l2sq;
    if (std::abs(f_lo) < tol) return {c_lo, lo};
    if (std::abs(f_hi) < tol) return {c_hi, hi};
    if (f_lo > 0.0 || f_hi < 0.0) {
        std::ostringstream msg;
        msg << "target |Q|^2 = " << target_l2sq << " outside the branch range [" << l2sq(lo) << ", " << l2sq(hi)
            << "] for c in [" << c_lo << ", " << c_hi << "]";
        throw Error(ErrorCode::OutOfRange, msg.str());
    }

    double a = c_lo;
    double b = c_hi;
    SolitaryWave mid_wave = lo;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (a + b);
        const Field seed = (mid - a < b - mid) ? lo.profile : hi.profile;
        mid_wave = solve(mid, seed);
        const double f = l2sq(mid_wave) - target_l2sq;
        if (std::abs(f) < tol || b - a < 1e-15) return {mid, mid_wave};
        if (f < 0.0) {
            a = mid;
            lo = mid_wave;
        } else {
            b = mid;
            hi = mid_wave;
        }
    }
    throw Error(ErrorCode::NonConvergence, "mass matching bisection did not converge");
}

std::vector<ModulationRecord> track_modulation(const Trajectory& trajectory, const SolitaryWave& wave,
                                               std::optional<double> c_star, const FitOptions& options) {
    const auto& recs = trajectory.records;
    if (recs.empty() || !recs.front().snapshot) {
        throw Error(ErrorCode::InvalidArgument, "trajectory carries no snapshots");
    }
    const double cs = c_star.value_or(wave.params.c);
    const double L = wave.profile.grid().length();
    std::vector<ModulationRecord> out(recs.size());

    detail::parallel_for(recs.size(), [&](std::size_t i) {
        ModulationRecord& m = out[i];
        m.t = recs[i].t;
        m.c_star = cs;
        if (!recs[i].snapshot) {
            m.ok = false;
            m.failure = "no snapshot";
            return;
        }
        try {
            const Decomposition d = decompose(*recs[i].snapshot, wave.profile, options);
            m.rho = d.rho;
            m.eta_l2 = norm(d.eta, NormKind::L2);
            m.eta_h1 = norm(d.eta, NormKind::H1);
            m.ortho_defect = d.ortho_defect;
            m.distance_h1 = d.distance_h1;
        } catch (const Error& e) {
            m.ok = false;
            m.failure = e.what();
        }
    });

    // Unwrap the frame translation, then move to the lab frame.
    double previous_raw = 0.0;
    double unwrapped = 0.0;
    bool started = false;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!out[i].ok) {
            out[i].rho = std::nan("");
            continue;
        }
        const double raw = out[i].rho;
        unwrapped = started ? unwrapped + std::remainder(raw - previous_raw, L) : raw;
        started = true;
        previous_raw = raw;
        out[i].rho = unwrapped + recs[i].frame_shift;
    }

    // Centered differences, then 3-point smoothing.
    std::vector<double> raw_dot(out.size(), std::nan(""));
    for (std::size_t i = 0; i < out.size(); ++i) {
        const std::size_t lo = i == 0 ? 0 : i - 1;
        const std::size_t hi = i + 1 == out.size() ? i : i + 1;
        if (hi == lo) {
            raw_dot[i] = 0.0;
            continue;
        }
        raw_dot[i] = (out[hi].rho - out[lo].rho) / (out[hi].t - out[lo].t);
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (i == 0 || i + 1 == out.size()) {
            out[i].rho_dot = raw_dot[i];
        } else {
            out[i].rho_dot = (raw_dot[i - 1] + raw_dot[i] + raw_dot[i + 1]) / 3.0;
        }
    }
    return out;
}

double rho_dot_constant(const std::vector<ModulationRecord>& records, double c) {
    double worst = 0.0;
    for (const auto& r : records) {
        if (!r.ok) continue;
        const double gap = std::abs(r.rho_dot - c);
        if (gap == 0.0) continue;
        worst = std::max(worst, r.eta_l2 > 0.0 ? gap / r.eta_l2 : std::numeric_limits<double>::infinity());
    }
    return worst;
}

void write_modulation_csv(std::ostream& out, const std::vector<ModulationRecord>& records) {
    CsvWriter csv(out, {"t", "rho", "rho_dot", "c_star", "eta_l2", "eta_h1", "ortho_defect"});
    for (const auto& r : records) csv.row({r.t, r.rho, r.rho_dot, r.c_star, r.eta_l2, r.eta_h1, r.ortho_defect});
}

}  // namespace benjamin
