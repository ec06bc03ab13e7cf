#pragma once

#include <limits>

#include "biphoton/interferometers.hpp"

namespace biphoton {

/// Two scans differing only in the arm phase: phi = 0 and phi = pi/2.
struct QuadraturePair {
    CoincidenceScan scan_re;
    CoincidenceScan scan_im;

    void validate() const {
        const auto& a = scan_re.config;
        const auto& b = scan_im.config;
        detail::require(a.kind == b.kind && a.tau_grid == b.tau_grid && a.mu_grid == b.mu_grid &&
                            a.tau0 == b.tau0,
                        "QuadraturePair: scan configurations do not match");
        detail::require(a.noise.poisson == b.noise.poisson &&
                            a.noise.pairs_per_setting == b.noise.pairs_per_setting,
                        "QuadraturePair: noise metadata inconsistent");
        detail::require(std::abs(a.arm_phase) < 1e-12 &&
                            std::abs(b.arm_phase - 0.5 * std::numbers::pi) < 1e-12,
                        "QuadraturePair: need phi = 0 and phi = pi/2 scans");
        detail::require(scan_re.provenance == scan_im.provenance,
                        "QuadraturePair: provenance mismatch");
    }
};

enum class ReconstructionTarget { f_plus, f_minus };

inline const char* to_string(ReconstructionTarget t) {
    return t == ReconstructionTarget::f_plus ? "f_plus" : "f_minus";
}

struct ReconstructionReport {
    ReconstructionTarget target = ReconstructionTarget::f_minus;
    SpectralFunction estimate;
    std::optional<double> fidelity;       // set when a truth reference is supplied
    std::vector<double> residual_map;     // |assembled - forward model|, row-major
    InterferometerKind method = InterferometerKind::hom;
    double anchor_offset = 0.0;           // baseband anchor used for the inversion
};

/// |<a,b>|^2 with the L2 inner product; both unit norm by construction.
inline double fidelity(const SpectralFunction& a, const SpectralFunction& b) {
    const double f = std::norm(inner_product(a, b));
    return std::clamp(f, 0.0, 1.0);
}

/// Multiplies `estimate` by the unit phase maximizing Re<reference, estimate>.
inline SpectralFunction align_global_phase(const SpectralFunction& estimate,
                                           const SpectralFunction& reference) {
    const cplx ov = inner_product(reference, estimate);
    detail::require(std::abs(ov) > 1e-15, "align_global_phase: zero overlap");
    SpectralFunction out = estimate;
    out.multiply_phase(-std::arg(ov));
    return out;
}

/// Resamples f onto `grid` by linear interpolation and renormalizes.
inline SpectralFunction resample(const SpectralFunction& f, const FrequencyGrid& grid) {
    std::vector<cplx> v(grid.count);
    for (std::size_t i = 0; i < grid.count; ++i) v[i] = f.sample_at(grid.offset(i));
    return SpectralFunction(grid, std::move(v));
}

// ------------------------------------------------------------------ assembly

/// Combines the two quadratures into the complex interference map.
/// HOM: W(tau, mu/2) with Re = 1-2R;  N00N: F+(mu,2tau) or F-(mu,2tau) with
/// Re = 2R-1 and the antisymmetric e^{-i mu tau / 2} divided out.
inline SpectroMap assemble_complex_map(const QuadraturePair& pair, SymmetryClass symmetry,
                                       double carrier = 0.0) {
    pair.validate();
    const auto& cfg = pair.scan_re.config;
    detail::require(cfg.kind != InterferometerKind::combo,
                    "assemble_complex_map: combination scans go through combo_postprocess");
    SpectroMap map;
    map.tau_axis = cfg.tau_grid;
    map.carrier = carrier;
    const std::size_t nt = cfg.tau_grid.count, nm = cfg.mu_grid.count;
    map.values.resize(nt * nm);
    if (cfg.kind == InterferometerKind::hom) {
        map.kind = MapKind::wigner_minus;
        map.mu_axis = FrequencyGrid(nm, 0.5 * cfg.mu_grid.spacing, 0.0);
        for (std::size_t j = 0; j < nt; ++j)
            for (std::size_t k = 0; k < nm; ++k)
                map.at(j, k) = cplx(1.0 - 2.0 * pair.scan_re.value(j, k),
                                    1.0 - 2.0 * pair.scan_im.value(j, k));
        return map;
    }
    detail::require(symmetry != SymmetryClass::anyonic,
                    "assemble_complex_map: anyonic N00N scans have no closed-form map");
    map.kind = (symmetry == SymmetryClass::symmetric) ? MapKind::stft_plus : MapKind::stft_minus;
    map.mu_axis = cfg.mu_grid;
    for (std::size_t j = 0; j < nt; ++j) {
        const double tau = cfg.tau_grid.value(j);
        for (std::size_t k = 0; k < nm; ++k) {
            cplx v(2.0 * pair.scan_re.value(j, k) - 1.0, 2.0 * pair.scan_im.value(j, k) - 1.0);
            if (symmetry == SymmetryClass::antisymmetric)
                v *= detail::phase(0.5 * cfg.mu_grid.offset(k) * tau);  // divide e^{-i mu tau/2}
            map.at(j, k) = v;
        }
    }
    return map;
}

// ------------------------------------------------------------- combo pipeline

namespace detail {

inline std::vector<std::size_t> window_indices(const DelayGrid& g, double center, double w) {
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < g.count; ++j)
        if (std::abs(g.value(j) - center) <= w + 1e-9 * g.spacing) idx.push_back(j);
    return idx;
}

inline double taper_weight(double s, double w) {
    const double edge = 0.9 * w;
    const double a = std::abs(s);
    if (a <= edge) return 1.0;
    return std::max(0.0, (w - a) / (w - edge));
}

}  // namespace detail

/// Splits a combination-interferometer quadrature pair into the two interference
/// maps: the side lobes at tau = +-tau0 carry one transform (F+ for symmetric,
/// F- for antisymmetric); substituting it back into the central window isolates
/// the other. Returns (map_plus, map_minus) on the central s-axis.
inline std::pair<SpectroMap, SpectroMap> combo_postprocess(const QuadraturePair& pair,
                                                           SymmetryClass symmetry,
                                                           double lobe_halfwidth,
                                                           double carrier = 0.0) {
    pair.validate();
    const auto& cfg = pair.scan_re.config;
    detail::require(cfg.kind == InterferometerKind::combo,
                    "combo_postprocess: needs combination-interferometer scans");
    detail::require(symmetry != SymmetryClass::anyonic,
                    "combo_postprocess: anyonic states must be symmetrized first");
    const double w = lobe_halfwidth, tau0 = cfg.tau0;
    detail::require(w > 0.0, "combo_postprocess: lobe half-width must be positive");
    // w = 6/sigma, so sigma*tau0 >= 8 is tau0 >= (4/3) w
    detail::require(tau0 >= (4.0 / 3.0) * w - 1e-9,
                    "combo_postprocess: lobe windows overlap the central window "
                    "(sigma*tau0 < 8); increase tau0 to at least " +
                        std::to_string((4.0 / 3.0) * w));
    const double steps = tau0 / cfg.tau_grid.spacing;
    detail::require(std::abs(steps - std::round(steps)) < 1e-9,
                    "combo_postprocess: tau0 must be an integer multiple of the tau spacing");

    const auto cen = detail::window_indices(cfg.tau_grid, 0.0, w);
    const auto lobp = detail::window_indices(cfg.tau_grid, +tau0, w);
    const auto lobm = detail::window_indices(cfg.tau_grid, -tau0, w);
    detail::require(cen.size() == lobp.size() && cen.size() == lobm.size() && cen.size() >= 16,
                    "combo_postprocess: scan range does not cover the central and lobe windows");

    const std::size_t ns = cen.size(), nm = cfg.mu_grid.count;
    DelayGrid s_axis(ns, cfg.tau_grid.spacing, 0.0);
    SpectroMap lobe_map;      // F+ (symmetric) or F- (antisymmetric)
    lobe_map.tau_axis = s_axis;
    lobe_map.mu_axis = cfg.mu_grid;
    lobe_map.values.resize(ns * nm);
    SpectroMap centre_map = lobe_map;

    auto assembled = [&](std::size_t j, std::size_t k) {
        return cplx(2.0 * pair.scan_re.value(j, k) - 1.0, 2.0 * pair.scan_im.value(j, k) - 1.0);
    };

    double lobe_dev = 0.0;
    for (std::size_t r = 0; r < ns; ++r) {
        const double s = s_axis.value(r);
        const double tw = detail::taper_weight(s, w);
        for (std::size_t k = 0; k < nm; ++k) {
            const double mu = cfg.mu_grid.offset(k);
            cplx lp = 4.0 * assembled(lobp[r], k);
            cplx lm = 4.0 * assembled(lobm[r], k);
            if (symmetry == SymmetryClass::antisymmetric) {
                // divide the known dressing e^{-i mu tau / 2} e^{+- i mu tau0}
                lp *= detail::phase(0.5 * mu * (tau0 + s) - mu * tau0);
                lm *= detail::phase(0.5 * mu * (-tau0 + s) + mu * tau0);
            }
            lobe_dev = std::max(lobe_dev, std::abs(lp - lm));
            lobe_map.at(r, k) = 0.5 * (lp + lm) * tw;
        }
    }
    (void)lobe_dev;

    for (std::size_t r = 0; r < ns; ++r) {
        const double s = s_axis.value(r);
        const double tw = detail::taper_weight(s, w);
        for (std::size_t k = 0; k < nm; ++k) {
            const double mu = cfg.mu_grid.offset(k);
            const cplx xc = assembled(cen[r], k);
            if (symmetry == SymmetryClass::symmetric) {
                // X = -1/2 F+ - 1/2 C  (lobe and P terms negligible in the far regime)
                const cplx c = -2.0 * xc - lobe_map.at(r, k);
                centre_map.at(r, k) = c * detail::phase(0.5 * mu * s) * tw;  // F- = C e^{+i mu s/2}
            } else {
                // X = +1/2 F+ + 1/2 C with C = e^{-i mu s / 2} F-
                const cplx c = detail::phase(-0.5 * mu * s) * lobe_map.at(r, k);
                centre_map.at(r, k) = (2.0 * xc - c) * tw;
            }
        }
    }

    SpectroMap map_plus, map_minus;
    if (symmetry == SymmetryClass::symmetric) {
        map_plus = std::move(lobe_map);
        map_plus.kind = MapKind::stft_plus;
        map_plus.carrier = carrier;
        map_minus = std::move(centre_map);
        map_minus.kind = MapKind::stft_minus;
    } else {
        map_minus = std::move(lobe_map);
        map_minus.kind = MapKind::stft_minus;
        map_plus = std::move(centre_map);
        map_plus.kind = MapKind::stft_plus;
        map_plus.carrier = carrier;
    }
    return {std::move(map_plus), std::move(map_minus)};
}

// -------------------------------------------------------------- reconstruction

namespace detail {

/// (1/pi) integral of the map column against the anchored collapse kernel.
inline cplx collapse_column(const SpectroMap& map, std::size_t k, double anchor) {
    const auto& ta = map.tau_axis;
    const auto w = quad_weights(ta.count, ta.spacing);
    const double mu = map.mu_axis.offset(k);
    cplx acc(0.0, 0.0);
    for (std::size_t j = 0; j < ta.count; ++j) {
        const double s = ta.value(j);
        double ph;
        switch (map.kind) {
            case MapKind::wigner_minus: ph = 2.0 * (mu - anchor) * s; break;
            case MapKind::stft_plus: ph = -(2.0 * (map.carrier + anchor) + mu) * s; break;
            default: ph = 2.0 * anchor * s; break;
        }
        acc += map.value(j, k) * phase(ph) * w[j];
    }
    return acc / std::numbers::pi;
}

}  // namespace detail

/// Inverts an STFT map to the complex spectral function. Anchored at a = 0
/// when |f(0)| is significant, otherwise at the |f| profile maximum; an
/// explicit anchor (baseband offset on the mu lattice) overrides.
inline ReconstructionReport reconstruct_from_stft(const SpectroMap& map,
                                                  ReconstructionTarget target,
                                                  std::optional<double> anchor = std::nullopt,
                                                  const SpectralFunction* truth = nullptr) {
    detail::require(map.kind != MapKind::wigner_minus,
                    "reconstruct_from_stft: use reconstruct_from_wigner for Wigner maps");
    const std::size_t nm = map.mu_axis.count;
    // |f(a)|^2 profile over the mu lattice from the anchored mu=0 collapse
    std::size_t k0 = 0;
    for (std::size_t k = 0; k < nm; ++k)
        if (std::abs(map.mu_axis.offset(k)) < std::abs(map.mu_axis.offset(k0))) k0 = k;
    detail::require(std::abs(map.mu_axis.offset(k0)) < 1e-9 * map.mu_axis.spacing,
                    "reconstruct_from_stft: the mu grid must contain mu = 0");
    // anchored collapse of the mu = 0 column gives |f(a)|^2 for any candidate a
    std::vector<double> profile(nm);
    for (std::size_t k = 0; k < nm; ++k)
        profile[k] = std::max(detail::collapse_column(map, k0, map.mu_axis.offset(k)).real(), 0.0);
    std::size_t ka = k0;
    const double peak = std::sqrt(*std::max_element(profile.begin(), profile.end()));
    if (anchor.has_value()) {
        double best = std::numeric_limits<double>::max();
        for (std::size_t k = 0; k < nm; ++k) {
            const double d = std::abs(map.mu_axis.offset(k) - *anchor);
            if (d < best) { best = d; ka = k; }
        }
    } else if (std::sqrt(profile[k0]) < 1e-3 * peak) {
        ka = static_cast<std::size_t>(
            std::max_element(profile.begin(), profile.end()) - profile.begin());
    }
    const double a = map.mu_axis.offset(ka);
    const double fa = std::sqrt(profile[ka]);
    detail::require(fa > 1e-6 * peak && peak > 0.0,
                    "reconstruct_from_stft: anchor amplitude vanishes; supply an anchor at "
                    "the |f| profile maximum");

    // p(mu) = f(a) f*(a + mu); estimate on the shifted lattice, then recentre
    std::vector<cplx> est_raw(nm);
    for (std::size_t k = 0; k < nm; ++k)
        est_raw[k] = std::conj(detail::collapse_column(map, k, a) / fa);
    FrequencyGrid out_grid(nm, map.mu_axis.spacing,
                           (map.kind == MapKind::stft_plus) ? map.carrier : 0.0);
    std::vector<cplx> est_vals(nm);
    if (std::abs(a) < 1e-12) {
        est_vals = est_raw;
    } else {
        // samples live at offsets a + mu_k; interpolate back onto the symmetric lattice
        for (std::size_t j = 0; j < nm; ++j) {
            const double want = out_grid.offset(j);
            const double t = (want - a - map.mu_axis.offset(0)) / map.mu_axis.spacing;
            const double n1 = static_cast<double>(nm - 1);
            if (t < -1e-9 || t > n1 + 1e-9) { est_vals[j] = 0.0; continue; }
            const double tr = std::round(t);
            if (std::abs(t - tr) < 1e-9) {
                est_vals[j] = est_raw[static_cast<std::size_t>(std::clamp(tr, 0.0, n1))];
            } else {
                const auto i = static_cast<std::size_t>(std::floor(t));
                const double fr = t - static_cast<double>(i);
                est_vals[j] = est_raw[i] * (1.0 - fr) + est_raw[std::min(i + 1, nm - 1)] * fr;
            }
        }
    }

    ReconstructionReport rep;
    rep.target = target;
    rep.method = InterferometerKind::noon;
    rep.anchor_offset = a;
    rep.estimate = SpectralFunction(out_grid, std::move(est_vals));
    if (truth != nullptr) {
        const SpectralFunction ref = resample(*truth, out_grid);
        rep.fidelity = fidelity(rep.estimate, ref);
    }
    // forward-model residual on the map lattice
    rep.residual_map.resize(map.values.size());
    const SpectroMap model = map_over_grid(map.kind, rep.estimate, map.tau_axis, map.mu_axis);
    for (std::size_t i = 0; i < map.values.size(); ++i)
        rep.residual_map[i] = std::abs(map.values[i] - model.values[i]);
    return rep;
}

/// Inverts a Wigner map: p(m) = (1/pi) int W(tau, m) e^{2 i (m-a) tau} dtau
/// = f(a) f*(2m - a); the marginal (1/pi) int W(tau, m) dtau = |f(m)|^2
/// anchors the modulus.
inline ReconstructionReport reconstruct_from_wigner(const SpectroMap& map,
                                                    std::optional<double> anchor = std::nullopt,
                                                    const SpectralFunction* truth = nullptr) {
    detail::require(map.kind == MapKind::wigner_minus,
                    "reconstruct_from_wigner: needs a Wigner map");
    const std::size_t nm = map.mu_axis.count;
    const auto wts = detail::quad_weights(map.tau_axis.count, map.tau_axis.spacing);
    // marginal profile |f(m)|^2
    std::vector<double> profile(nm);
    for (std::size_t k = 0; k < nm; ++k) {
        cplx acc(0.0, 0.0);
        for (std::size_t j = 0; j < map.tau_axis.count; ++j) acc += map.value(j, k) * wts[j];
        profile[k] = std::max(acc.real() / std::numbers::pi, 0.0);
    }
    std::size_t k0 = 0;
    for (std::size_t k = 0; k < nm; ++k)
        if (std::abs(map.mu_axis.offset(k)) < std::abs(map.mu_axis.offset(k0))) k0 = k;
    std::size_t ka = k0;
    const double peak = std::sqrt(*std::max_element(profile.begin(), profile.end()));
    if (anchor.has_value()) {
        double best = std::numeric_limits<double>::max();
        for (std::size_t k = 0; k < nm; ++k) {
            const double d = std::abs(map.mu_axis.offset(k) - *anchor);
            if (d < best) { best = d; ka = k; }
        }
    } else if (std::sqrt(profile[k0]) < 1e-3 * peak) {
        ka = static_cast<std::size_t>(
            std::max_element(profile.begin(), profile.end()) - profile.begin());
    }
    const double a = map.mu_axis.offset(ka);
    const double fa = std::sqrt(profile[ka]);
    detail::require(fa > 1e-6 * peak && peak > 0.0,
                    "reconstruct_from_wigner: anchor amplitude vanishes");

    // recovered sample at 2 m_k - a
    std::vector<cplx> est_raw(nm);
    for (std::size_t k = 0; k < nm; ++k)
        est_raw[k] = std::conj(detail::collapse_column(map, k, a) / fa);
    FrequencyGrid out_grid(nm, 2.0 * map.mu_axis.spacing, 0.0);
    std::vector<cplx> est_vals(nm);
    for (std::size_t j = 0; j < nm; ++j) {
        const double want = out_grid.offset(j);  // = 2 m_j for a symmetric m grid
        const double t = (want + a - 2.0 * map.mu_axis.offset(0)) / (2.0 * map.mu_axis.spacing);
        const double n1 = static_cast<double>(nm - 1);
        if (t < -1e-9 || t > n1 + 1e-9) { est_vals[j] = 0.0; continue; }
        const double tr = std::round(t);
        if (std::abs(t - tr) < 1e-9) {
            est_vals[j] = est_raw[static_cast<std::size_t>(std::clamp(tr, 0.0, n1))];
        } else {
            const auto i = static_cast<std::size_t>(std::floor(t));
            const double fr = t - static_cast<double>(i);
            est_vals[j] = est_raw[i] * (1.0 - fr) + est_raw[std::min(i + 1, nm - 1)] * fr;
        }
    }

    ReconstructionReport rep;
    rep.target = ReconstructionTarget::f_minus;
    rep.method = InterferometerKind::hom;
    rep.anchor_offset = a;
    rep.estimate = SpectralFunction(out_grid, std::move(est_vals));
    if (truth != nullptr) {
        const SpectralFunction ref = resample(*truth, out_grid);
        rep.fidelity = fidelity(rep.estimate, ref);
    }
    rep.residual_map.resize(map.values.size());
    const SpectroMap model = map_over_grid(map.kind, rep.estimate, map.tau_axis, map.mu_axis);
    for (std::size_t i = 0; i < map.values.size(); ++i)
        rep.residual_map[i] = std::abs(map.values[i] - model.values[i]);
    return rep;
}

/// Weighted least-squares fit of arg f = a + b w + c w^2 over the region where
/// |f| >= threshold * max|f| (phases unwrapped along the grid). Returns c.
inline double fit_quadratic_phase(const SpectralFunction& f, double threshold = 1e-2) {
    double fmax = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) fmax = std::max(fmax, std::abs(f.value(i)));
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (std::abs(f.value(i)) >= threshold * fmax) idx.push_back(i);
    detail::require(idx.size() >= 5, "fit_quadratic_phase: too few significant samples");
    std::vector<double> ph(idx.size());
    ph[0] = std::arg(f.value(idx[0]));
    for (std::size_t n = 1; n < idx.size(); ++n) {
        double d = std::arg(f.value(idx[n])) - std::arg(f.value(idx[n - 1]));
        while (d > std::numbers::pi) d -= 2.0 * std::numbers::pi;
        while (d < -std::numbers::pi) d += 2.0 * std::numbers::pi;
        ph[n] = ph[n - 1] + d;
    }
    // normal equations for weighted quadratic LS
    double s[5] = {0, 0, 0, 0, 0}, r[3] = {0, 0, 0};
    for (std::size_t n = 0; n < idx.size(); ++n) {
        const double x = f.grid().offset(idx[n]);
        const double wgt = std::norm(f.value(idx[n]));
        double xp = 1.0;
        for (int p = 0; p <= 4; ++p) { s[p] += wgt * xp; xp *= x; }
        r[0] += wgt * ph[n];
        r[1] += wgt * ph[n] * x;
        r[2] += wgt * ph[n] * x * x;
    }
    // solve the 3x3 system [s0 s1 s2; s1 s2 s3; s2 s3 s4] [a b c] = r
    double m[3][4] = {{s[0], s[1], s[2], r[0]}, {s[1], s[2], s[3], r[1]}, {s[2], s[3], s[4], r[2]}};
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int row = col + 1; row < 3; ++row)
            if (std::abs(m[row][col]) > std::abs(m[piv][col])) piv = row;
        std::swap(m[col], m[piv]);
        for (int row = 0; row < 3; ++row) {
            if (row == col) continue;
            const double fct = m[row][col] / m[col][col];
            for (int c2 = col; c2 < 4; ++c2) m[row][c2] -= fct * m[col][c2];
        }
    }
    return m[2][3] / m[2][2];
}

}  // namespace biphoton
