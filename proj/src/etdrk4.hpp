#pragma once

#include <complex>
#include <numbers>
#include <vector>

#include "benjamin/field.hpp"

namespace benjamin::detail {

/// Fourth-order exponential time differencing (Cox-Matthews form) for
/// v_t = L v + N(t, v), with the phi-function weights averaged over a circle
/// of radius one around each h*L so that small arguments do not cancel.
class Etdrk4 {
public:
    Etdrk4(const std::vector<std::complex<double>>& linear, double h) : h_(h) {
        constexpr int kContour = 32;
        const std::size_t m = linear.size();
        e_.resize(m);
        e2_.resize(m);
        q_.resize(m);
        f1_.resize(m);
        f2_.resize(m);
        f3_.resize(m);
        for (std::size_t k = 0; k < m; ++k) {
            const std::complex<double> z = h * linear[k];
            e_[k] = std::exp(z);
            e2_[k] = std::exp(0.5 * z);
            std::complex<double> q{}, f1{}, f2{}, f3{};
            for (int j = 0; j < kContour; ++j) {
                const std::complex<double> r = z + std::polar(1.0, 2.0 * std::numbers::pi * (j + 0.5) / kContour);
                const std::complex<double> er = std::exp(r);
                const std::complex<double> r2 = r * r;
                const std::complex<double> r3 = r2 * r;
                q += (std::exp(0.5 * r) - 1.0) / r;
                f1 += (-4.0 - r + er * (4.0 - 3.0 * r + r2)) / r3;
                f2 += (2.0 + r + er * (r - 2.0)) / r3;
                f3 += (-4.0 - 3.0 * r - r2 + er * (4.0 - r)) / r3;
            }
            const double scale = h / kContour;
            q_[k] = q * scale;
            f1_[k] = f1 * scale;
            f2_[k] = f2 * scale;
            f3_[k] = f3 * scale;
        }
    }

    double step_size() const { return h_; }

    /// Advances v from t to t + h. `nonlinear(t, v, out)` fills out = N(t, v).
    template <class Nonlinear>
    void step(Spectrum& v, double t, Nonlinear&& nonlinear) {
        const std::size_t m = v.size();
        nv_.resize(m);
        na_.resize(m);
        nb_.resize(m);
        nc_.resize(m);
        a_.resize(m);
        b_.resize(m);
        c_.resize(m);

        nonlinear(t, v, nv_);
        for (std::size_t k = 0; k < m; ++k) a_[k] = e2_[k] * v[k] + q_[k] * nv_[k];
        nonlinear(t + 0.5 * h_, a_, na_);
        for (std::size_t k = 0; k < m; ++k) b_[k] = e2_[k] * v[k] + q_[k] * na_[k];
        nonlinear(t + 0.5 * h_, b_, nb_);
        for (std::size_t k = 0; k < m; ++k) c_[k] = e2_[k] * a_[k] + q_[k] * (2.0 * nb_[k] - nv_[k]);
        nonlinear(t + h_, c_, nc_);
        for (std::size_t k = 0; k < m; ++k) {
            v[k] = e_[k] * v[k] + f1_[k] * nv_[k] + 2.0 * f2_[k] * (na_[k] + nb_[k]) + f3_[k] * nc_[k];
        }
    }

    /// Exact linear propagation, used when the nonlinearity is switched off.
    void propagate(Spectrum& v) const {
        for (std::size_t k = 0; k < v.size(); ++k) v[k] *= e_[k];
    }

private:
    double h_;
    Spectrum e_, e2_, q_, f1_, f2_, f3_;
    Spectrum nv_, na_, nb_, nc_, a_, b_, c_;
};

}  // namespace benjamin::detail
