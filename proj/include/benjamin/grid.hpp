#pragma once

#include <cstddef>
#include <vector>

namespace benjamin {

/// Uniform periodic grid on [-L/2, L/2) with n nodes.
///
/// Nodes are x_j = -L/2 + j*dx.  Spectral data is stored in the real-to-complex
/// half layout: index k in [0, n/2] carries wavenumber 2*pi*k/L, and k = n/2
/// is the Nyquist mode (wavenumber -pi*n/L in the symmetric ordering).
class Grid {
public:
    Grid(std::size_t n, double length);

    std::size_t size() const noexcept { return n_; }
    double length() const noexcept { return length_; }
    double dx() const noexcept { return length_ / static_cast<double>(n_); }

    double x(std::size_t j) const noexcept {
        return -0.5 * length_ + static_cast<double>(j) * dx();
    }
    std::vector<double> nodes() const;

    /// Number of coefficients in the half spectrum (n/2 + 1).
    std::size_t spectral_size() const noexcept { return n_ / 2 + 1; }
    bool is_nyquist(std::size_t k) const noexcept { return k == n_ / 2; }
    /// Non-negative wavenumber of half-spectrum index k (Nyquist reports pi*n/L).
    double wavenumber(std::size_t k) const noexcept;
    /// Full symmetric set {2*pi*k/L : k = -n/2, ..., n/2-1}.
    std::vector<double> wavenumbers() const;
    /// Largest index retained by the 2/3 rule.
    std::size_t dealias_cutoff() const noexcept { return n_ / 3; }

    friend bool operator==(const Grid& a, const Grid& b) noexcept {
        return a.n_ == b.n_ && a.length_ == b.length_;
    }

private:
    std::size_t n_;
    double length_;
};

Grid make_grid(std::size_t n, double length);

}  // namespace benjamin
