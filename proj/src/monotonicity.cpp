#include "benjamin/monotonicity.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "benjamin/csv.hpp"
#include "benjamin/error.hpp"
#include "benjamin/spectral.hpp"
#include "parallel.hpp"

namespace benjamin {

namespace {

constexpr int kChiPanels = 2048;

double bump(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return std::exp(-1.0 / (x * (1.0 - x)));
}

double weighted_sum(std::span<const double> density, std::span<const double> weight, double dx) {
    double s = 0.0;
    for (std::size_t j = 0; j < density.size(); ++j) s += density[j] * weight[j];
    return s * dx;
}

std::vector<double> energy_density(const Field& u, double gamma) {
    const Field ux = derivative(u, 1);
    const Field hux = hilbert(ux);
    std::vector<double> e(u.size());
    for (std::size_t j = 0; j < e.size(); ++j) {
        e[j] = 0.5 * ux[j] * ux[j] - 0.5 * gamma * u[j] * hux[j] - u[j] * u[j] * u[j] / 6.0;
    }
    return e;
}

std::vector<double> psi_values(const CutoffRecord& cut, double t, const Grid& grid, double frame_shift) {
    std::vector<double> w(grid.size());
    const double c = cut.center(t);
    const double width = cut.width(t);
    const Cutoff& chi = make_chi();
    for (std::size_t j = 0; j < w.size(); ++j) w[j] = chi((grid.x(j) + frame_shift - c) / width);
    return w;
}

std::vector<double> h_weight(const Grid& grid, double R, Side side, double xshift) {
    const Cutoff& chi = make_chi();
    const double width = std::pow(R, 0.75);
    std::vector<double> w(grid.size());
    for (std::size_t j = 0; j < w.size(); ++j) {
        const double v = chi((grid.x(j) - xshift + 2.0 * R) / width);
        w[j] = side == Side::Right ? v : 1.0 - v;
    }
    return w;
}

}  // namespace

Cutoff::Cutoff() : h_(0.5 / kChiPanels), table_(kChiPanels + 1, 0.0) {
    using boost::math::quadrature::gauss;
    for (int k = 0; k < kChiPanels; ++k) {
        const double a = k * h_;
        table_[k + 1] = table_[k] + gauss<double, 15>::integrate(bump, a, a + h_);
    }
    norm_ = 0.5 / table_.back();
    for (double& v : table_) v *= norm_;
    table_.back() = 0.5;
}

double Cutoff::derivative(double x) const { return norm_ * bump(x); }

double Cutoff::operator()(double x) const {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    if (x > 0.5) return 1.0 - (*this)(1.0 - x);
    const int k = std::min(static_cast<int>(x / h_), kChiPanels - 1);
    const double a = k * h_;
    return table_[k] + norm_ * boost::math::quadrature::gauss<double, 15>::integrate(bump, a, x);
}

const Cutoff& make_chi() {
    static const Cutoff chi;
    return chi;
}

void CutoffRecord::validate() const {
    if (!(R > 0.0) || !std::isfinite(R)) throw Error(ErrorCode::InvalidArgument, "R must be positive");
    if (!(vartheta >= 0.375 && vartheta <= 0.625)) {
        throw Error(ErrorCode::InvalidArgument, "vartheta must lie in [3/8, 5/8]");
    }
    if (!(theta > 0.0 && theta <= 1.0)) throw Error(ErrorCode::InvalidArgument, "theta must lie in (0, 1]");
    if (!std::isfinite(t0) || !std::isfinite(x0)) throw Error(ErrorCode::InvalidArgument, "non-finite t0 or x0");
}

double CutoffRecord::center(double t) const {
    const double offset = side == Side::Right ? R : -2.0 * R;
    return x0 + offset + vartheta * (t - t0);
}

double CutoffRecord::width(double t) const { return std::pow(R + std::abs(t0 - t) / 8.0, theta); }

double eval_psi(const CutoffRecord& cut, double t, double x) {
    return make_chi()((x - cut.center(t)) / cut.width(t));
}

Field psi_on_grid(const CutoffRecord& cut, double t, const Grid& grid, double frame_shift) {
    cut.validate();
    return Field(grid, psi_values(cut, t, grid, frame_shift));
}

double functional_I(const Field& u, const CutoffRecord& cut, double t, double frame_shift) {
    cut.validate();
    const auto w = psi_values(cut, t, u.grid(), frame_shift);
    std::vector<double> d(u.size());
    for (std::size_t j = 0; j < d.size(); ++j) d[j] = 0.5 * u[j] * u[j];
    return weighted_sum(d, w, u.grid().dx());
}

double functional_J(const Field& u, const CutoffRecord& cut, double gamma, double t, double frame_shift) {
    cut.validate();
    const auto w = psi_values(cut, t, u.grid(), frame_shift);
    return weighted_sum(energy_density(u, gamma), w, u.grid().dx());
}

double functional_H(const Field& u, double R, Side side, double theta0, double gamma, double xshift) {
    if (!(R > 0.0)) throw Error(ErrorCode::InvalidArgument, "R must be positive");
    std::vector<double> d = energy_density(u, gamma);
    for (std::size_t j = 0; j < d.size(); ++j) d[j] += theta0 * u[j] * u[j];
    return weighted_sum(d, h_weight(u.grid(), R, side, xshift), u.grid().dx());
}

FunctionalRecord evaluate_functionals(const Field& u, const CutoffRecord& cut, double gamma, double t, double theta0,
                                      double xshift, double frame_shift) {
    FunctionalRecord r;
    r.t = t;
    r.R = cut.R;
    r.theta0 = theta0;
    r.I_val = functional_I(u, cut, t, frame_shift);
    r.J_val = functional_J(u, cut, gamma, t, frame_shift);
    r.H_right = functional_H(u, cut.R, Side::Right, theta0, gamma, xshift);
    r.H_left = functional_H(u, cut.R, Side::Left, theta0, gamma, xshift);
    r.mass = mass(u);
    r.energy = energy(u, gamma);
    return r;
}

const char* to_string(SweepFunctional which) {
    switch (which) {
    case SweepFunctional::IRight: return "I_right";
    case SweepFunctional::ILeft: return "I_left";
    case SweepFunctional::Combo4IJ: return "combo4IJ";
    case SweepFunctional::HRight: return "H_right";
    }
    return "unknown";
}

SweepFunctional parse_sweep_functional(const std::string& name) {
    for (auto w : {SweepFunctional::IRight, SweepFunctional::ILeft, SweepFunctional::Combo4IJ, SweepFunctional::HRight}) {
        if (name == to_string(w)) return w;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown functional '" + name + "'");
}

std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
        if (!(y[i] > 0.0) || !(x[i] > 0.0)) continue;
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++m;
    }
    if (m < 2) return std::nullopt;
    const double den = m * sxx - sx * sx;
    if (den == 0.0) return std::nullopt;
    return (m * sxy - sx * sy) / den;
}

SweepReport monotonicity_sweep(const Trajectory& trajectory, const TimeSeries& x_of_t, const std::vector<double>& radii,
                               SweepFunctional which, const SweepOptions& options) {
    const auto& recs = trajectory.records;
    if (recs.empty()) throw Error(ErrorCode::InvalidArgument, "empty trajectory");
    for (const auto& r : recs) {
        if (!r.snapshot) throw Error(ErrorCode::InvalidArgument, "trajectory carries no snapshots");
    }
    if (radii.empty()) throw Error(ErrorCode::InvalidArgument, "empty R list");
    const double gamma = trajectory.gamma;
    const Grid& grid = recs.front().snapshot->grid();
    const std::size_t N = recs.size();

    SweepReport report;
    report.which = which;
    report.radii = radii;
    double sup_h1 = 0.0;
    for (const auto& r : recs) sup_h1 = std::max(sup_h1, r.h1norm);
    report.theta0 = options.theta0.value_or(4.0 + sup_h1);

    // hypotheses: inf xdot >= 5/6 and smallness away from x(t)
    report.min_xdot = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < N; ++i) {
        const double dt = recs[i].t - recs[i - 1].t;
        if (dt > 0.0) report.min_xdot = std::min(report.min_xdot, (x_of_t(recs[i].t) - x_of_t(recs[i - 1].t)) / dt);
    }
    if (N < 2) report.min_xdot = 0.0;
    for (const auto& r : recs) {
        const double xc = x_of_t(r.t);
        for (std::size_t j = 0; j < grid.size(); ++j) {
            if (std::abs((*r.snapshot)[j]) > options.loc_threshold) {
                report.r0 = std::max(report.r0, std::abs(grid.x(j) + r.frame_shift - xc));
            }
        }
    }
    if (report.min_xdot < 5.0 / 6.0) {
        std::ostringstream msg;
        msg << "HypothesisViolated: min xdot = " << report.min_xdot << " < 5/6";
        report.warnings.push_back(msg.str());
    }
    if (report.r0 > radii.back()) {
        std::ostringstream msg;
        msg << "HypothesisViolated: localization radius R0 = " << report.r0 << " exceeds the largest R";
        report.warnings.push_back(msg.str());
    }

    // per-snapshot densities
    std::vector<std::vector<double>> dens(N);
    detail::parallel_for(N, [&](std::size_t i) {
        const Field& u = *recs[i].snapshot;
        std::vector<double> d(u.size());
        if (which == SweepFunctional::IRight || which == SweepFunctional::ILeft) {
            for (std::size_t j = 0; j < d.size(); ++j) d[j] = 0.5 * u[j] * u[j];
        } else if (which == SweepFunctional::Combo4IJ) {
            d = energy_density(u, gamma);
            for (std::size_t j = 0; j < d.size(); ++j) d[j] += 2.0 * u[j] * u[j];
        } else {
            d = energy_density(u, gamma);
            for (std::size_t j = 0; j < d.size(); ++j) d[j] += report.theta0 * u[j] * u[j];
        }
        dens[i] = std::move(d);
    });

    const bool backward = which == SweepFunctional::IRight || which == SweepFunctional::Combo4IJ;
    const Side side = which == SweepFunctional::ILeft ? Side::Left : Side::Right;
    std::vector<std::vector<SweepRow>> per_r(radii.size());

    detail::parallel_for(radii.size(), [&](std::size_t ir) {
        const double R = radii[ir];
        auto& rows = per_r[ir];
        if (which == SweepFunctional::HRight) {
            std::vector<double> value(N);
            for (std::size_t i = 0; i < N; ++i) {
                const double xs = x_of_t(recs[i].t) - recs[i].frame_shift;
                value[i] = weighted_sum(dens[i], h_weight(grid, R, Side::Right, xs), grid.dx());
            }
            for (std::size_t i0 = 0; i0 < N; ++i0) {
                for (std::size_t i = i0; i < N; ++i) {
                    if (options.max_span && recs[i].t - recs[i0].t > *options.max_span) break;
                    rows.push_back({R, recs[i].t, recs[i0].t, value[i], value[i] - value[i0]});
                }
            }
            return;
        }
        for (std::size_t i0 = 0; i0 < N; ++i0) {
            CutoffRecord cut{R, options.vartheta, recs[i0].t, x_of_t(recs[i0].t), options.theta, side};
            auto eval = [&](std::size_t i) {
                return weighted_sum(dens[i], psi_values(cut, recs[i].t, grid, recs[i].frame_shift), grid.dx());
            };
            const double f0 = eval(i0);
            for (std::size_t i = 0; i < N; ++i) {
                const bool in_range = backward ? i <= i0 : i >= i0;
                if (!in_range) continue;
                if (options.max_span && std::abs(recs[i].t - recs[i0].t) > *options.max_span) continue;
                const double f = i == i0 ? f0 : eval(i);
                rows.push_back({R, recs[i].t, recs[i0].t, f, backward ? f0 - f : f - f0});
            }
        }
    });

    report.max_defect.assign(radii.size(), -std::numeric_limits<double>::infinity());
    for (std::size_t ir = 0; ir < radii.size(); ++ir) {
        for (const auto& row : per_r[ir]) report.max_defect[ir] = std::max(report.max_defect[ir], row.defect);
        report.rows.insert(report.rows.end(), per_r[ir].begin(), per_r[ir].end());
        report.k_min = std::max(report.k_min, std::max(report.max_defect[ir], 0.0) * std::pow(radii[ir], 0.25));
    }
    report.slope = loglog_slope(radii, report.max_defect);
    return report;
}

void write_sweep_csv(std::ostream& out, const SweepReport& report) {
    out << "R,t,t0,functional,value,defect\n";
    for (const auto& r : report.rows) {
        out << format_double(r.R) << ',' << format_double(r.t) << ',' << format_double(r.t0) << ','
            << to_string(report.which) << ',' << format_double(r.value) << ',' << format_double(r.defect) << '\n';
    }
}

void write_sweep_summary(std::ostream& out, const SweepReport& report) {
    out << "functional=" << to_string(report.which) << '\n';
    for (std::size_t i = 0; i < report.radii.size(); ++i) {
        out << "max_defect.R" << format_double(report.radii[i]) << '=' << format_double(report.max_defect[i]) << '\n';
    }
    out << "slope=" << (report.slope ? format_double(*report.slope) : std::string("nan")) << '\n';
    out << "K_min=" << format_double(report.k_min) << '\n';
    out << "theta0=" << format_double(report.theta0) << '\n';
    out << "min_xdot=" << format_double(report.min_xdot) << '\n';
    out << "R0=" << format_double(report.r0) << '\n';
    out << "warnings=" << report.warnings.size() << '\n';
    for (std::size_t i = 0; i < report.warnings.size(); ++i) out << "warning." << i << '=' << report.warnings[i] << '\n';
}

CommutatorRatios commutator_defect(const Field& f, const Field& u) {
    if (!(f.grid() == u.grid())) throw Error(ErrorCode::InvalidArgument, "fields live on different grids");
    const Field ux = derivative(u, 1);
    const Field a = hilbert(padded_product(f, ux)) - padded_product(f, hilbert(ux));
    const Field b = hilbert(derivative(padded_product(f, u), 1)) - padded_product(f, hilbert(ux));
    CommutatorRatios r;
    r.hilbert_term = norm(a, NormKind::L2);
    r.derivative_term = norm(b, NormKind::L2);
    const double u_l2 = norm(u, NormKind::L2);
    r.scale = norm(derivative(f, 1), NormKind::Linf) * u_l2;
    const double size = norm(f, NormKind::Linf) * norm(u, NormKind::H1);
    const double num = r.hilbert_term + r.derivative_term;
    if (r.scale <= 1e-13 * size || r.scale == 0.0) {
        if (num <= 1e-12 * size) {
            r.ratio = 0.0;
            return r;
        }
        throw Error(ErrorCode::DegenerateInput, "|f'| |u| vanishes while the commutators do not");
    }
    r.ratio = num / r.scale;
    return r;
}

CommutatorDerivative commutator_derivative_defect(const Field& f, const Field& u, double eps) {
    if (!(eps > 0.0 && eps <= 0.5)) throw Error(ErrorCode::InvalidArgument, "eps must lie in (0, 1/2]");
    if (!(f.grid() == u.grid())) throw Error(ErrorCode::InvalidArgument, "fields live on different grids");
    const Field ux = derivative(u, 1);
    const Field c = hilbert(padded_product(f, ux)) - padded_product(f, hilbert(ux));
    CommutatorDerivative r;
    r.left = norm(derivative(c, 1), NormKind::L2);
    r.right = (norm(fractional_derivative(f, 2.0 - eps), NormKind::Linf) +
               norm(fractional_derivative(f, 2.0 + eps), NormKind::Linf)) *
              norm(u, NormKind::L2);
    const double size = norm(f, NormKind::Linf) * norm(u, NormKind::H2);
    if (r.right <= 1e-13 * size || r.right == 0.0) {
        if (r.left <= 1e-12 * size) return r;
        throw Error(ErrorCode::DegenerateInput, "right side vanishes while the commutator does not");
    }
    r.ratio = r.left / r.right;
    return r;
}

double commutator_operator_norm(const Field& f, int max_iter, double tol) {
    const Grid& grid = f.grid();
    auto apply = [&](const Field& v) {
        const Field vx = derivative(v, 1);
        return derivative(hilbert(padded_product(f, vx)) - padded_product(f, hilbert(vx)), 1);
    };
    std::mt19937_64 rng(12345);
    std::normal_distribution<double> normal(0.0, 1.0);
    Spectrum s(grid.spectral_size());
    for (std::size_t k = 1; k <= grid.size() / 4; ++k) s[k] = {normal(rng), normal(rng)};
    Field v = Field::from_spectrum(grid, s);
    v = v * (1.0 / norm(v, NormKind::L2));
    double nu = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        const Field w = apply(apply(v));
        const double next = norm(w, NormKind::L2);
        if (next == 0.0) return 0.0;
        v = w * (1.0 / next);
        if (std::abs(next - nu) <= tol * next) return std::sqrt(next);
        nu = next;
    }
    return std::sqrt(nu);
}

Field psi_plateau(const Grid& grid, double R, double a, double b, double theta) {
    const double w = std::pow(R, theta);
    if (!(b - a > 2.0 * w) || a < -0.5 * grid.length() || b > 0.5 * grid.length()) {
        throw Error(ErrorCode::InvalidArgument, "plateau does not fit in the box");
    }
    const Cutoff& chi = make_chi();
    return Field::from_function(grid, [&](double x) { return chi((x - a) / w) * chi((b - x) / w); });
}

}  // namespace benjamin
