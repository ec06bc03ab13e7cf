#pragma once

#include "biphoton/jsa.hpp"

namespace biphoton {

namespace detail {

/// Quadrature of an oscillatory kernel e^{i kappa x} is trusted only while
/// |kappa| * spacing stays well below the Simpson alias band at pi/spacing.
/// (At |kappa|*h == pi the alternating Simpson weights resonate and return
/// a spurious -1/3 * integral of the envelope.)
inline void check_kernel_resolution(double kappa, double spacing, const char* who) {
    if (std::abs(kappa) * spacing > 2.5)
        throw std::invalid_argument(
            std::string(who) + ": kernel frequency " + std::to_string(std::abs(kappa)) +
            " unresolved by grid spacing " + std::to_string(spacing) +
            " (need |kappa|*spacing <= 2.5, i.e. spacing <= " +
            std::to_string(2.5 / std::abs(kappa)) + ")");
}

/// Mass of |f|^2 whose mu-shifted partner falls off the grid. Products with
/// an off-grid partner are dropped, so this is the truncation the shift costs.
inline void check_shift_tail(const SpectralFunction& f, double shift, const char* who) {
    const double half = f.grid().half_span();
    if (std::abs(shift) > f.grid().span())
        throw std::invalid_argument(std::string(who) + ": shift " + std::to_string(shift) +
                                    " exceeds the grid span");
    double lost = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double partner = f.grid().offset(i) + shift;
        if (partner < -half - 1e-12 || partner > half + 1e-12) lost += std::norm(f.value(i));
    }
    lost *= f.grid().spacing;
    if (lost > 1e-9)
        throw std::invalid_argument(
            std::string(who) + ": shift " + std::to_string(shift) + " pushes " +
            std::to_string(lost) + " of the L2 mass off the grid (need span >= " +
            std::to_string(2.0 * (f.support_radius() + std::abs(shift))) + ")");
}

}  // namespace detail

/// Chronocyclic Wigner distribution of f- at (tau, m):
///   W(tau, m) = int f(m - v) f*(m + v) e^{-2 i v tau} dv.
inline cplx wigner_minus(const SpectralFunction& fm, double tau, double m) {
    const auto& g = fm.grid();
    detail::check_kernel_resolution(2.0 * tau, g.spacing, "wigner_minus");
    detail::check_shift_tail(fm, 2.0 * std::abs(m), "wigner_minus");
    std::vector<cplx> t(g.count);
    for (std::size_t i = 0; i < g.count; ++i) {
        const double v = g.offset(i);
        const double ph = -2.0 * v * tau;
        t[i] = fm.sample_at(m - v) * std::conj(fm.sample_at(m + v)) *
               cplx(std::cos(ph), std::sin(ph));
    }
    return integrate_1d(std::span<const cplx>(t), g.spacing);
}

/// STFT of the pump axis: F+(mu, 2 tau) = int f(w) f*(w + mu) e^{i (2w + mu) tau} dw
/// with w absolute; the carrier phase e^{i 2 carrier tau} is applied analytically.
inline cplx stft_plus(const SpectralFunction& fp, double mu, double tau) {
    const auto& g = fp.grid();
    detail::check_kernel_resolution(2.0 * tau, g.spacing, "stft_plus");
    detail::check_shift_tail(fp, mu, "stft_plus");
    std::vector<cplx> t(g.count);
    for (std::size_t i = 0; i < g.count; ++i) {
        const double x = g.offset(i);
        const double ph = (2.0 * x + mu) * tau;
        t[i] = fp.value(i) * std::conj(fp.sample_at(x + mu)) * cplx(std::cos(ph), std::sin(ph));
    }
    const double cp = 2.0 * g.carrier * tau;
    return cplx(std::cos(cp), std::sin(cp)) * integrate_1d(std::span<const cplx>(t), g.spacing);
}

/// STFT of the phase-matching axis: F-(mu, 2 tau) = int f(w) f*(w + mu) e^{-2 i w tau} dw.
inline cplx stft_minus(const SpectralFunction& fm, double mu, double tau) {
    const auto& g = fm.grid();
    detail::check_kernel_resolution(2.0 * tau, g.spacing, "stft_minus");
    detail::check_shift_tail(fm, mu, "stft_minus");
    std::vector<cplx> t(g.count);
    for (std::size_t i = 0; i < g.count; ++i) {
        const double x = g.offset(i);
        const double ph = -2.0 * x * tau;
        t[i] = fm.value(i) * std::conj(fm.sample_at(x + mu)) * cplx(std::cos(ph), std::sin(ph));
    }
    const double cp = -2.0 * g.carrier * tau;
    return cplx(std::cos(cp), std::sin(cp)) * integrate_1d(std::span<const cplx>(t), g.spacing);
}

/// Linear pump transform P+(tau0) = int f(w) e^{-i (2w + 2 mu) tau0} dw (w absolute).
/// mu enters only as the phase e^{-2 i mu tau0}.
inline cplx p_plus(const SpectralFunction& fp, double tau0, double mu) {
    const auto& g = fp.grid();
    detail::check_kernel_resolution(2.0 * tau0, g.spacing, "p_plus");
    std::vector<cplx> t(g.count);
    for (std::size_t i = 0; i < g.count; ++i) {
        const double ph = -2.0 * g.offset(i) * tau0;
        t[i] = fp.value(i) * cplx(std::cos(ph), std::sin(ph));
    }
    const double cp = -2.0 * (g.carrier + mu) * tau0;
    return cplx(std::cos(cp), std::sin(cp)) * integrate_1d(std::span<const cplx>(t), g.spacing);
}

inline cplx p_minus(const SpectralFunction& fm, double tau0, double mu) {
    return p_plus(fm, tau0, mu);
}

/// Characteristic function of the symmetric time-frequency displacement:
///   chi(mu, tau) = e^{-i mu tau / 2} int f(w - mu) f*(w) e^{i w tau} dw.
inline cplx displacement_char(const SpectralFunction& fm, double mu, double tau) {
    const auto& g = fm.grid();
    detail::check_kernel_resolution(tau, g.spacing, "displacement_char");
    detail::check_shift_tail(fm, mu, "displacement_char");
    std::vector<cplx> t(g.count);
    for (std::size_t i = 0; i < g.count; ++i) {
        const double w = g.offset(i);
        const double ph = w * tau;
        t[i] = fm.sample_at(w - mu) * std::conj(fm.value(i)) * cplx(std::cos(ph), std::sin(ph));
    }
    const double cp = -0.5 * mu * tau;
    return cplx(std::cos(cp), std::sin(cp)) * integrate_1d(std::span<const cplx>(t), g.spacing);
}

enum class MapKind { wigner_minus, stft_plus, stft_minus };

inline const char* to_string(MapKind k) {
    switch (k) {
        case MapKind::wigner_minus: return "wigner_minus";
        case MapKind::stft_plus: return "stft_plus";
        default: return "stft_minus";
    }
}

/// Complex map over (tau, mu). Storage is row-major [tau][mu]. For
/// wigner_minus the mu axis holds the Wigner frequency argument m directly;
/// for the STFT kinds value(j,k) = F(mu_k, 2 tau_j).
struct SpectroMap {
    MapKind kind = MapKind::wigner_minus;
    DelayGrid tau_axis;
    FrequencyGrid mu_axis;   // baseband shift axis (carrier field unused)
    std::vector<cplx> values;
    double carrier = 0.0;    // carrier of the underlying f (stft_plus kernels)

    cplx value(std::size_t j, std::size_t k) const { return values[j * mu_axis.count + k]; }
    cplx& at(std::size_t j, std::size_t k) { return values[j * mu_axis.count + k]; }
};

/// Point-wise evaluation of the scalar transforms over a (tau, mu) lattice.
inline SpectroMap map_over_grid(MapKind kind, const SpectralFunction& f, const DelayGrid& tau_axis,
                                const FrequencyGrid& mu_axis) {
    SpectroMap map;
    map.kind = kind;
    map.tau_axis = tau_axis;
    map.mu_axis = mu_axis;
    map.carrier = f.grid().carrier;
    map.values.resize(tau_axis.count * mu_axis.count);
    for (std::size_t j = 0; j < tau_axis.count; ++j) {
        const double t = tau_axis.value(j);
        for (std::size_t k = 0; k < mu_axis.count; ++k) {
            const double m = mu_axis.offset(k);
            cplx v;
            switch (kind) {
                case MapKind::wigner_minus: v = wigner_minus(f, t, m); break;
                case MapKind::stft_plus: v = stft_plus(f, m, t); break;
                case MapKind::stft_minus: v = stft_minus(f, m, t); break;
            }
            map.at(j, k) = v;
        }
    }
    return map;
}

}  // namespace biphoton
