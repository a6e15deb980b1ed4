#include "benjamin/field.hpp"

#include <cmath>

#include "benjamin/error.hpp"
#include "benjamin/spectral.hpp"

namespace benjamin {

namespace {
void require_finite(std::span<const double> xs) {
    for (double v : xs) {
        if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "field sample is not finite");
    }
}

void require_same_grid(const Grid& a, const Grid& b) {
    if (!(a == b)) throw Error(ErrorCode::InvalidArgument, "fields live on different grids");
}
}  // namespace

Field::Field(const Grid& grid, std::vector<double> samples) : grid_(grid), samples_(std::move(samples)) {
    if (samples_.size() != grid_.size()) {
        throw Error(ErrorCode::InvalidArgument, "sample count does not match grid");
    }
    require_finite(samples_);
}

Field::Field(const Grid& grid, std::vector<double> samples, Spectrum spectrum)
    : grid_(grid), samples_(std::move(samples)), spectrum_(std::move(spectrum)) {
    require_finite(samples_);
}

Field Field::zeros(const Grid& grid) { return Field(grid, std::vector<double>(grid.size(), 0.0)); }

Field Field::from_function(const Grid& grid, const std::function<double(double)>& f) {
    std::vector<double> v(grid.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = f(grid.x(j));
    return Field(grid, std::move(v));
}

Field Field::from_spectrum(const Grid& grid, Spectrum coefficients) {
    if (coefficients.size() != grid.spectral_size()) {
        throw Error(ErrorCode::InvalidArgument, "spectrum size does not match grid");
    }
    // Zero mode and Nyquist carry real data for a real field.
    coefficients.front().imag(0.0);
    coefficients.back().imag(0.0);
    auto samples = inverse_transform(grid, coefficients);
    return Field(grid, std::move(samples), std::move(coefficients));
}

Spectrum Field::spectrum() const {
    if (spectrum_) return *spectrum_;
    return forward_transform(grid_, samples_);
}

Field Field::reflected() const {
    const std::size_t n = samples_.size();
    std::vector<double> r(n);
    for (std::size_t j = 0; j < n; ++j) r[j] = samples_[(n - j) % n];
    return Field(grid_, std::move(r));
}

Field Field::operator+(const Field& other) const {
    require_same_grid(grid_, other.grid_);
    std::vector<double> r(samples_);
    for (std::size_t j = 0; j < r.size(); ++j) r[j] += other.samples_[j];
    return Field(grid_, std::move(r));
}

Field Field::operator-(const Field& other) const {
    require_same_grid(grid_, other.grid_);
    std::vector<double> r(samples_);
    for (std::size_t j = 0; j < r.size(); ++j) r[j] -= other.samples_[j];
    return Field(grid_, std::move(r));
}

Field Field::operator*(double scale) const {
    std::vector<double> r(samples_);
    for (double& v : r) v *= scale;
    return Field(grid_, std::move(r));
}

Field Field::times(const Field& other) const {
    require_same_grid(grid_, other.grid_);
    std::vector<double> r(samples_);
    for (std::size_t j = 0; j < r.size(); ++j) r[j] *= other.samples_[j];
    return Field(grid_, std::move(r));
}

}  // namespace benjamin
