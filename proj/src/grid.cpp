#include "benjamin/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "benjamin/error.hpp"

namespace benjamin {

namespace {
bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }
}  // namespace

Grid::Grid(std::size_t n, double length) : n_(n), length_(length) {
    if (n < 16 || !is_power_of_two(n)) {
        throw Error(ErrorCode::InvalidArgument,
                    "grid size must be a power of two >= 16, got " + std::to_string(n));
    }
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw Error(ErrorCode::InvalidArgument, "domain length must be positive");
    }
}

Grid make_grid(std::size_t n, double length) { return Grid(n, length); }

std::vector<double> Grid::nodes() const {
    std::vector<double> xs(n_);
    for (std::size_t j = 0; j < n_; ++j) xs[j] = x(j);
    return xs;
}

double Grid::wavenumber(std::size_t k) const noexcept {
    return 2.0 * std::numbers::pi * static_cast<double>(k) / length_;
}

std::vector<double> Grid::wavenumbers() const {
    std::vector<double> xi(n_);
    const auto half = static_cast<long>(n_ / 2);
    for (long k = -half; k < half; ++k) {
        xi[static_cast<std::size_t>(k + half)] = 2.0 * std::numbers::pi * static_cast<double>(k) / length_;
    }
    return xi;
}

}  // namespace benjamin
