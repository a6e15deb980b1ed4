#include "benjamin/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "benjamin/error.hpp"

namespace benjamin {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

// One pair of plans with private buffers. Instances are thread-local, so
// concurrent runs never share a buffer; only planning is serialized.
class FftPlan {
public:
    explicit FftPlan(std::size_t n)
        : n_(n),
          real_(fftw_alloc_real(n)),
          complex_(fftw_alloc_complex(n / 2 + 1)) {
        std::lock_guard lock(planner_mutex());
        const int size = static_cast<int>(n);
        r2c_ = fftw_plan_dft_r2c_1d(size, real_, complex_, FFTW_ESTIMATE);
        c2r_ = fftw_plan_dft_c2r_1d(size, complex_, real_, FFTW_ESTIMATE);
    }
    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;
    ~FftPlan() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(c2r_);
        fftw_destroy_plan(r2c_);
        fftw_free(complex_);
        fftw_free(real_);
    }

    Spectrum forward(std::span<const double> samples) {
        std::copy(samples.begin(), samples.end(), real_);
        fftw_execute(r2c_);
        Spectrum out(n_ / 2 + 1);
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = {complex_[k][0], complex_[k][1]};
        return out;
    }

    std::vector<double> inverse(const Spectrum& coefficients) {
        for (std::size_t k = 0; k < coefficients.size(); ++k) {
            complex_[k][0] = coefficients[k].real();
            complex_[k][1] = coefficients[k].imag();
        }
        fftw_execute(c2r_);
        const double scale = 1.0 / static_cast<double>(n_);
        std::vector<double> out(n_);
        for (std::size_t j = 0; j < n_; ++j) out[j] = real_[j] * scale;
        return out;
    }

private:
    std::size_t n_;
    double* real_;
    fftw_complex* complex_;
    fftw_plan r2c_{};
    fftw_plan c2r_{};
};

FftPlan& plan_for(std::size_t n) {
    thread_local std::map<std::size_t, std::unique_ptr<FftPlan>> cache;
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<FftPlan>(n);
    return *slot;
}

double half_weight(const Grid& grid, std::size_t k) {
    return (k == 0 || grid.is_nyquist(k)) ? 1.0 : 2.0;
}

}  // namespace

Spectrum forward_transform(const Grid& grid, std::span<const double> samples) {
    if (samples.size() != grid.size()) throw Error(ErrorCode::InvalidArgument, "transform size mismatch");
    return plan_for(grid.size()).forward(samples);
}

std::vector<double> inverse_transform(const Grid& grid, const Spectrum& coefficients) {
    if (coefficients.size() != grid.spectral_size()) {
        throw Error(ErrorCode::InvalidArgument, "inverse transform size mismatch");
    }
    return plan_for(grid.size()).inverse(coefficients);
}

Spectrum apply_symbol(const Grid& grid, const Spectrum& coefficients, const Symbol& symbol) {
    Spectrum out(coefficients.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = symbol(grid.wavenumber(k), grid.is_nyquist(k)) * coefficients[k];
    }
    return out;
}

Field apply_multiplier(const Field& u, const Symbol& symbol) {
    return Field::from_spectrum(u.grid(), apply_symbol(u.grid(), u.spectrum(), symbol));
}

Field derivative(const Field& u, int order) {
    if (order < 1 || order > 3) throw Error(ErrorCode::InvalidArgument, "derivative order must be 1, 2 or 3");
    const bool odd = order % 2 == 1;
    return apply_multiplier(u, [order, odd](double xi, bool nyquist) -> std::complex<double> {
        if (nyquist && odd) return 0.0;
        return std::pow(std::complex<double>(0.0, xi), order);
    });
}

Field hilbert(const Field& u) {
    return apply_multiplier(u, [](double xi, bool nyquist) -> std::complex<double> {
        if (nyquist || xi == 0.0) return 0.0;
        return {0.0, 1.0};
    });
}

Field fractional_derivative(const Field& u, double s) {
    if (!(s >= 0.0)) throw Error(ErrorCode::InvalidArgument, "fractional exponent must be >= 0");
    return apply_multiplier(u, [s](double xi, bool) -> std::complex<double> {
        if (xi == 0.0) return s == 0.0 ? 1.0 : 0.0;
        return std::pow(std::abs(xi), s);
    });
}

Spectrum dealias(const Grid& grid, Spectrum coefficients) {
    const std::size_t cutoff = grid.dealias_cutoff();
    for (std::size_t k = cutoff + 1; k < coefficients.size(); ++k) coefficients[k] = 0.0;
    return coefficients;
}

Field dealias(const Field& u) { return Field::from_spectrum(u.grid(), dealias(u.grid(), u.spectrum())); }

Field shift(const Field& u, double s) {
    return apply_multiplier(u, [s](double xi, bool nyquist) -> std::complex<double> {
        if (nyquist) return std::cos(xi * s);
        return std::polar(1.0, -xi * s);
    });
}

Field dealiased_square(const Field& u) { return dealias(u.times(u)); }

Field padded_product(const Field& a, const Field& b) {
    const Grid& grid = a.grid();
    if (!(b.grid() == grid)) throw Error(ErrorCode::InvalidArgument, "fields live on different grids");
    const std::size_t n = grid.size();
    const Grid fine(2 * n, grid.length());
    auto pad = [&](const Field& u) {
        const Spectrum c = u.spectrum();
        Spectrum p(fine.spectral_size());
        for (std::size_t k = 0; k < n / 2; ++k) p[k] = 2.0 * c[k];
        p[n / 2] = c[n / 2];
        return inverse_transform(fine, p);
    };
    std::vector<double> fa = pad(a);
    const std::vector<double> fb = pad(b);
    for (std::size_t j = 0; j < fa.size(); ++j) fa[j] *= fb[j];
    const Spectrum prod = forward_transform(fine, fa);
    Spectrum out(grid.spectral_size());
    for (std::size_t k = 0; k < n / 2; ++k) out[k] = 0.5 * prod[k];
    out[n / 2] = prod[n / 2].real();
    return Field::from_spectrum(grid, std::move(out));
}

std::vector<double> interpolate(const Field& u, std::span<const double> points) {
    const Grid& grid = u.grid();
    const Spectrum c = u.spectrum();
    const double inv_n = 1.0 / static_cast<double>(grid.size());
    const double dk = grid.wavenumber(1);
    const std::size_t nyq = grid.size() / 2;
    std::vector<double> out(points.size());
    for (std::size_t p = 0; p < points.size(); ++p) {
        const double y = points[p] + 0.5 * grid.length();
        const std::complex<double> step = std::polar(1.0, dk * y);
        std::complex<double> phase = step;
        double acc = c[0].real();
        for (std::size_t k = 1; k < nyq; ++k) {
            acc += 2.0 * (c[k] * phase).real();
            phase *= step;
        }
        acc += c[nyq].real() * std::cos(grid.wavenumber(nyq) * y);
        out[p] = acc * inv_n;
    }
    return out;
}

double integrate(const Field& u) {
    double s = 0.0;
    for (double v : u.values()) s += v;
    return s * u.grid().dx();
}

double inner(const Field& u, const Field& v) {
    if (!(u.grid() == v.grid())) throw Error(ErrorCode::InvalidArgument, "fields live on different grids");
    double s = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) s += u[j] * v[j];
    return s * u.grid().dx();
}

double spectral_energy(const Grid& grid, const Spectrum& coefficients,
                       const std::function<double(double)>& weight) {
    double s = 0.0;
    for (std::size_t k = 0; k < coefficients.size(); ++k) {
        s += half_weight(grid, k) * weight(grid.wavenumber(k)) * std::norm(coefficients[k]);
    }
    const double n = static_cast<double>(grid.size());
    return s * grid.length() / (n * n);
}

double norm(const Field& u, NormKind kind) {
    switch (kind) {
    case NormKind::L2: return std::sqrt(inner(u, u));
    case NormKind::H1:
        return std::sqrt(spectral_energy(u.grid(), u.spectrum(), [](double xi) { return 1.0 + xi * xi; }));
    case NormKind::H2:
        return std::sqrt(spectral_energy(u.grid(), u.spectrum(), [](double xi) {
            const double x2 = xi * xi;
            return 1.0 + x2 + x2 * x2;
        }));
    case NormKind::HalfSeminorm:
        return std::sqrt(spectral_energy(u.grid(), u.spectrum(), [](double xi) { return std::abs(xi); }));
    case NormKind::Linf: {
        double m = 0.0;
        for (double v : u.values()) m = std::max(m, std::abs(v));
        return m;
    }
    }
    return 0.0;
}

double norm_linf_restricted(const Field& u, double a, double b) {
    const Grid& g = u.grid();
    if (a > b || a < -0.5 * g.length() || b > 0.5 * g.length()) {
        throw Error(ErrorCode::InvalidArgument, "restriction interval must lie inside the box");
    }
    double m = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        const double x = g.x(j);
        if (x >= a && x <= b) m = std::max(m, std::abs(u[j]));
    }
    return m;
}

double norm_linf_outside(const Field& u, double center, double radius) {
    const Grid& g = u.grid();
    const double L = g.length();
    double m = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        double d = std::remainder(g.x(j) - center, L);
        if (std::abs(d) > radius) m = std::max(m, std::abs(u[j]));
    }
    return m;
}

}  // namespace benjamin
