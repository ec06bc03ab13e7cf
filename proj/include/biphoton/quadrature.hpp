#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "biphoton/grid.hpp"

namespace biphoton {

namespace detail {

/// Deterministic pairwise summation, left-to-right recursion tree.
template <typename T>
T pairwise_sum(std::span<const T> v) {
    if (v.size() <= 8) {
        T acc{};
        for (const T& x : v) acc += x;
        return acc;
    }
    const std::size_t mid = v.size() / 2;
    return pairwise_sum(v.subspan(0, mid)) + pairwise_sum(v.subspan(mid));
}

inline void check_finite(std::span<const cplx> v, const char* who) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag()))
            throw std::invalid_argument(std::string(who) + ": non-finite sample at index " +
                                        std::to_string(i));
    }
}

/// Composite Simpson weights for odd counts, trapezoid for even counts.
inline std::vector<double> quad_weights(std::size_t n, double h) {
    std::vector<double> w(n);
    if (n % 2 == 1) {
        w[0] = w[n - 1] = h / 3.0;
        for (std::size_t i = 1; i + 1 < n; ++i) w[i] = (i % 2 == 1) ? 4.0 * h / 3.0 : 2.0 * h / 3.0;
    } else {
        w[0] = w[n - 1] = 0.5 * h;
        for (std::size_t i = 1; i + 1 < n; ++i) w[i] = h;
    }
    return w;
}

}  // namespace detail

/// Quadrature of uniformly sampled values: composite Simpson for odd counts,
/// trapezoid fallback for even counts. Summation order is fixed (pairwise).
inline cplx integrate_1d(std::span<const cplx> values, double spacing) {
    detail::require(values.size() >= 3, "integrate_1d: need at least 3 samples");
    detail::require(spacing > 0.0, "integrate_1d: spacing must be positive");
    detail::check_finite(values, "integrate_1d");
    const auto w = detail::quad_weights(values.size(), spacing);
    std::vector<cplx> t(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) t[i] = values[i] * w[i];
    return detail::pairwise_sum(std::span<const cplx>(t));
}

inline cplx integrate_1d(const ComplexSamples& s) {
    return integrate_1d(std::span<const cplx>(s.values), s.spacing);
}

/// Tensor-product Simpson rule over a rectangular array (rows of equal length).
inline cplx integrate_2d(const std::vector<std::vector<cplx>>& values, double spacing_a,
                         double spacing_b) {
    detail::require(values.size() >= 3, "integrate_2d: need at least 3 rows");
    const std::size_t cols = values[0].size();
    detail::require(cols >= 3, "integrate_2d: need at least 3 columns");
    for (std::size_t r = 0; r < values.size(); ++r)
        detail::require(values[r].size() == cols,
                        "integrate_2d: ragged array at row " + std::to_string(r));
    std::vector<cplx> rows(values.size());
    for (std::size_t r = 0; r < values.size(); ++r)
        rows[r] = integrate_1d(std::span<const cplx>(values[r]), spacing_b);
    return integrate_1d(std::span<const cplx>(rows), spacing_a);
}

/// Evaluates int f(w) e^{-i w t} dw over the sampled axis by direct quadrature.
inline cplx fourier_sum(const ComplexSamples& s, double kernel_frequency) {
    detail::check_finite(std::span<const cplx>(s.values), "fourier_sum");
    std::vector<cplx> phased(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double ph = -kernel_frequency * s.coord(i);
        phased[i] = s.values[i] * cplx(std::cos(ph), std::sin(ph));
    }
    return integrate_1d(std::span<const cplx>(phased), s.spacing);
}

}  // namespace biphoton
