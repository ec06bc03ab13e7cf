#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace biphoton {

using cplx = std::complex<double>;

namespace detail {

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace detail

/// Uniform sampling of an angular-frequency axis. Samples are stored as
/// baseband offsets symmetric about zero; the absolute center frequency is
/// kept separately in `carrier`.
struct FrequencyGrid {
    std::size_t count = 0;
    double spacing = 0.0;   // rad/s
    double carrier = 0.0;   // rad/s, absolute center of the axis

    FrequencyGrid() = default;
    FrequencyGrid(std::size_t n, double h, double c = 0.0)
        : count(n), spacing(h), carrier(c) {
        detail::require(n >= 16, "FrequencyGrid: count must be >= 16, got " + std::to_string(n));
        detail::require(h > 0.0, "FrequencyGrid: spacing must be positive");
        detail::require(c >= 0.0, "FrequencyGrid: carrier must be non-negative");
    }

    // offset_i = (i - (count-1)/2) * spacing; exactly antisymmetric in i
    double offset(std::size_t i) const {
        return (static_cast<double>(i) - 0.5 * static_cast<double>(count - 1)) * spacing;
    }
    double absolute(std::size_t i) const { return carrier + offset(i); }
    double half_span() const { return 0.5 * static_cast<double>(count - 1) * spacing; }
    double span() const { return static_cast<double>(count - 1) * spacing; }

    bool operator==(const FrequencyGrid& o) const = default;
};

/// Uniform sampling of a delay axis, symmetric about `center` (0 for ordinary
/// scans, +-tau0 for lobe windows).
struct DelayGrid {
    std::size_t count = 0;
    double spacing = 0.0;   // seconds
    double center = 0.0;    // seconds

    DelayGrid() = default;
    DelayGrid(std::size_t n, double h, double c = 0.0)
        : count(n), spacing(h), center(c) {
        detail::require(n >= 1, "DelayGrid: count must be positive");
        detail::require(h > 0.0, "DelayGrid: spacing must be positive");
    }

    double offset(std::size_t i) const {
        return (static_cast<double>(i) - 0.5 * static_cast<double>(count - 1)) * spacing;
    }
    double value(std::size_t i) const { return center + offset(i); }
    double half_span() const { return 0.5 * static_cast<double>(count - 1) * spacing; }

    bool operator==(const DelayGrid& o) const = default;
};

/// Complex values sampled on a uniform axis. `origin` is the coordinate of
/// values[0]; the axis is origin + i*spacing.
struct ComplexSamples {
    std::vector<cplx> values;
    double spacing = 0.0;
    double origin = 0.0;

    ComplexSamples() = default;
    ComplexSamples(std::vector<cplx> v, double h, double x0)
        : values(std::move(v)), spacing(h), origin(x0) {
        detail::require(spacing > 0.0, "ComplexSamples: spacing must be positive");
    }

    static ComplexSamples on(const FrequencyGrid& g, std::vector<cplx> v) {
        detail::require(v.size() == g.count, "ComplexSamples: length does not match grid");
        return ComplexSamples(std::move(v), g.spacing, g.offset(0));
    }
    static ComplexSamples on(const DelayGrid& g, std::vector<cplx> v) {
        detail::require(v.size() == g.count, "ComplexSamples: length does not match grid");
        return ComplexSamples(std::move(v), g.spacing, g.value(0));
    }

    double coord(std::size_t i) const { return origin + static_cast<double>(i) * spacing; }
    std::size_t size() const { return values.size(); }
};

}  // namespace biphoton
