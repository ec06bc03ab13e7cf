#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

#include "biphoton/quadrature.hpp"

namespace biphoton {

/// A complex spectral amplitude sampled on a FrequencyGrid, kept at unit L2
/// norm (sum |v|^2 * spacing == 1).
class SpectralFunction {
  public:
    SpectralFunction() = default;
    SpectralFunction(FrequencyGrid grid, std::vector<cplx> values)
        : grid_(grid), values_(std::move(values)) {
        detail::require(values_.size() == grid_.count,
                        "SpectralFunction: value count does not match grid");
        detail::check_finite(std::span<const cplx>(values_), "SpectralFunction");
        normalize();
    }

    const FrequencyGrid& grid() const { return grid_; }
    const std::vector<cplx>& values() const { return values_; }
    cplx value(std::size_t i) const { return values_[i]; }
    std::size_t size() const { return values_.size(); }

    /// Riemann L2 norm (the normalization convention of this library).
    double norm() const {
        double s = 0.0;
        for (const cplx& v : values_) s += std::norm(v);
        return std::sqrt(s * grid_.spacing);
    }

    /// Linear interpolation at a baseband offset; zero outside the grid.
    cplx sample_at(double offset) const {
        const double t = (offset - grid_.offset(0)) / grid_.spacing;
        const double n1 = static_cast<double>(grid_.count - 1);
        if (t < -1e-9 || t > n1 + 1e-9) return cplx(0.0, 0.0);
        const double tr = std::round(t);
        if (std::abs(t - tr) < 1e-9) {
            const auto i = static_cast<std::size_t>(std::clamp(tr, 0.0, n1));
            return values_[i];
        }
        const auto i = static_cast<std::size_t>(std::floor(t));
        const double fr = t - static_cast<double>(i);
        return values_[i] * (1.0 - fr) + values_[i + 1] * fr;
    }

    /// Smallest offset radius containing all but `tail` of the L2 mass.
    double support_radius(double tail = 1e-12) const {
        double total = 0.0;
        for (const cplx& v : values_) total += std::norm(v);
        double acc = 0.0;
        std::size_t lo = 0, hi = grid_.count - 1;
        while (lo < hi) {
            const double a = std::norm(values_[lo]), b = std::norm(values_[hi]);
            if (acc + std::min(a, b) > tail * total) break;
            if (a < b) { acc += a; ++lo; } else { acc += b; --hi; }
        }
        return std::max(std::abs(grid_.offset(lo)), std::abs(grid_.offset(hi)));
    }

    void multiply_phase(double theta) {
        const cplx p(std::cos(theta), std::sin(theta));
        for (cplx& v : values_) v *= p;
    }

  private:
    void normalize() {
        const double n = norm();
        detail::require(n > 0.0, "SpectralFunction: zero norm");
        for (cplx& v : values_) v /= n;
    }

    FrequencyGrid grid_;
    std::vector<cplx> values_;
};

/// L2 inner product <a,b> = sum conj(a) b * spacing; grids must match.
inline cplx inner_product(const SpectralFunction& a, const SpectralFunction& b) {
    detail::require(a.grid() == b.grid(), "inner_product: grid mismatch");
    cplx s(0.0, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a.value(i)) * b.value(i);
    return s * a.grid().spacing;
}

/// Gaussian amplitude exp(-(w-c)^2 / 4 sigma^2) * exp(i chirp (w-c)^2), unit norm.
inline SpectralFunction make_gaussian(const FrequencyGrid& grid, double center_offset,
                                      double sigma, double chirp = 0.0) {
    detail::require(sigma > 0.0, "make_gaussian: sigma must be positive");
    const double span = grid.span();
    detail::require(span >= 6.0 * sigma,
                    "make_gaussian: grid span " + std::to_string(span) +
                        " rad/s is narrower than 6 sigma = " + std::to_string(6.0 * sigma));
    std::vector<cplx> v(grid.count);
    for (std::size_t i = 0; i < grid.count; ++i) {
        const double d = grid.offset(i) - center_offset;
        const double amp = std::exp(-d * d / (4.0 * sigma * sigma));
        const double ph = chirp * d * d;
        v[i] = amp * cplx(std::cos(ph), std::sin(ph));
    }
    return SpectralFunction(grid, std::move(v));
}

/// Hermite-Gauss mode of order 0 (even Gaussian) or 1 (odd, w * Gaussian).
inline SpectralFunction make_hermite_gauss(const FrequencyGrid& grid, int order, double sigma) {
    detail::require(order == 0 || order == 1, "make_hermite_gauss: order must be 0 or 1");
    if (order == 0) return make_gaussian(grid, 0.0, sigma);
    detail::require(sigma > 0.0, "make_hermite_gauss: sigma must be positive");
    detail::require(grid.span() >= 6.0 * sigma, "make_hermite_gauss: grid too narrow");
    std::vector<cplx> v(grid.count);
    for (std::size_t i = 0; i < grid.count; ++i) {
        const double w = grid.offset(i);
        v[i] = cplx(w * std::exp(-w * w / (4.0 * sigma * sigma)), 0.0);
    }
    return SpectralFunction(grid, std::move(v));
}

/// sinc(w / bandwidth), unit norm, even.
inline SpectralFunction make_sinc(const FrequencyGrid& grid, double bandwidth) {
    detail::require(bandwidth > 0.0, "make_sinc: bandwidth must be positive");
    detail::require(grid.span() >= 6.0 * bandwidth, "make_sinc: grid too narrow");
    std::vector<cplx> v(grid.count);
    for (std::size_t i = 0; i < grid.count; ++i) {
        const double x = grid.offset(i) / bandwidth;
        v[i] = cplx(std::abs(x) < 1e-12 ? 1.0 : std::sin(x) / x, 0.0);
    }
    return SpectralFunction(grid, std::move(v));
}

}  // namespace biphoton
