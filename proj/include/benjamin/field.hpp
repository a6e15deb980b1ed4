#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "benjamin/grid.hpp"

namespace benjamin {

/// Half-spectrum coefficients in FFTW's unnormalized convention:
/// u_hat[k] = sum_j u_j exp(-2 pi i j k / n).
using Spectrum = std::vector<std::complex<double>>;

/// Real grid function. Immutable once built; the spectral representation is
/// cached only when the field was produced from one.
class Field {
public:
    Field(const Grid& grid, std::vector<double> samples);

    static Field zeros(const Grid& grid);
    static Field from_function(const Grid& grid, const std::function<double(double)>& f);
    static Field from_spectrum(const Grid& grid, Spectrum coefficients);

    const Grid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return samples_.size(); }
    std::span<const double> values() const noexcept { return samples_; }
    double operator[](std::size_t j) const noexcept { return samples_[j]; }

    bool has_spectrum() const noexcept { return spectrum_.has_value(); }
    /// Cached coefficients, or a freshly computed transform.
    Spectrum spectrum() const;

    /// Mirror image u(-x) on the grid (node j maps to node n-j).
    Field reflected() const;

    Field operator+(const Field& other) const;
    Field operator-(const Field& other) const;
    Field operator*(double scale) const;
    friend Field operator*(double scale, const Field& f) { return f * scale; }
    /// Pointwise product.
    Field times(const Field& other) const;

private:
    Field(const Grid& grid, std::vector<double> samples, Spectrum spectrum);

    Grid grid_;
    std::vector<double> samples_;
    std::optional<Spectrum> spectrum_;
};

}  // namespace benjamin
