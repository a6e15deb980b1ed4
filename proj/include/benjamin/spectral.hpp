#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "benjamin/field.hpp"

namespace benjamin {

/// Forward real-to-complex transform (unnormalized).
Spectrum forward_transform(const Grid& grid, std::span<const double> samples);
/// Inverse transform including the 1/n factor.
std::vector<double> inverse_transform(const Grid& grid, const Spectrum& coefficients);

/// Symbol evaluated at a non-negative wavenumber of the half spectrum.
/// `nyquist` is true for the n/2 coefficient, which must map to a real value.
using Symbol = std::function<std::complex<double>(double xi, bool nyquist)>;

Spectrum apply_symbol(const Grid& grid, const Spectrum& coefficients, const Symbol& symbol);
Field apply_multiplier(const Field& u, const Symbol& symbol);

/// Spectral derivative of order 1..3, symbol (i xi)^order.
Field derivative(const Field& u, int order);
/// Hilbert transform with symbol i*sgn(xi); consistent with H d/dx = -D_x.
Field hilbert(const Field& u);
/// D_x^s with symbol |xi|^s.
Field fractional_derivative(const Field& u, double s);
/// 2/3-rule projection: coefficients with |k| > n/3 are removed.
Field dealias(const Field& u);
Spectrum dealias(const Grid& grid, Spectrum coefficients);
/// Translation u(. - s), exact for the trigonometric interpolant.
Field shift(const Field& u, double s);
/// Dealiased square P(u^2).
Field dealiased_square(const Field& u);
/// Product of the trigonometric interpolants projected back onto the grid
/// band (computed on a twice finer grid, so no aliasing).
Field padded_product(const Field& a, const Field& b);

/// Evaluate the trigonometric interpolant of u at arbitrary points.
std::vector<double> interpolate(const Field& u, std::span<const double> points);

/// Trapezoidal quadrature (spectrally accurate on the periodic box).
double integrate(const Field& u);
double inner(const Field& u, const Field& v);

enum class NormKind { L2, H1, H2, HalfSeminorm, Linf };

double norm(const Field& u, NormKind kind);
/// Sup norm over the nodes with a <= x_j <= b.
double norm_linf_restricted(const Field& u, double a, double b);
/// Sup norm over nodes whose periodic distance to `center` exceeds `radius`.
double norm_linf_outside(const Field& u, double center, double radius);

/// Weighted Parseval sum (L/n^2) * sum_full w(xi)|u_hat|^2.
double spectral_energy(const Grid& grid, const Spectrum& coefficients,
                       const std::function<double(double)>& weight);

}  // namespace benjamin
