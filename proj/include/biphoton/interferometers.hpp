#pragma once

#include <cstdlib>
#include <thread>
#include <variant>

#include "biphoton/distributions.hpp"
#include "biphoton/rng.hpp"

namespace biphoton {

enum class InterferometerKind { hom, noon, combo };
enum class Provenance { oracle, closed_exact, closed_far };

inline const char* to_string(InterferometerKind k) {
    switch (k) {
        case InterferometerKind::hom: return "hom";
        case InterferometerKind::noon: return "noon";
        default: return "combo";
    }
}
inline const char* to_string(Provenance p) {
    switch (p) {
        case Provenance::oracle: return "oracle";
        case Provenance::closed_exact: return "closed-exact";
        default: return "closed-far";
    }
}

struct NoiseSpec {
    bool poisson = false;
    std::uint64_t pairs_per_setting = 0;
    std::uint64_t seed = 0;

    static NoiseSpec none() { return {}; }
    static NoiseSpec make_poisson(std::uint64_t pairs, std::uint64_t seed) {
        detail::require(pairs >= 1, "NoiseSpec: pairs_per_setting must be >= 1");
        return {true, pairs, seed};
    }
};

struct ScanConfig {
    InterferometerKind kind = InterferometerKind::hom;
    DelayGrid tau_grid;
    FrequencyGrid mu_grid;   // frequency-shift axis (carrier unused)
    double tau0 = 0.0;       // combo only
    double arm_phase = 0.0;  // phi, in [0, 2 pi)
    NoiseSpec noise;

    void validate() const {
        detail::require(arm_phase >= 0.0 && arm_phase < 2.0 * std::numbers::pi,
                        "ScanConfig: arm phase must lie in [0, 2 pi)");
        if (kind != InterferometerKind::combo)
            detail::require(tau0 == 0.0, "ScanConfig: tau0 is only meaningful for combo");
    }
};

struct CoincidenceScan {
    ScanConfig config;
    Provenance provenance = Provenance::closed_exact;
    std::vector<double> values;  // row-major [tau][mu]

    double value(std::size_t j, std::size_t k) const {
        return values[j * config.mu_grid.count + k];
    }
};

// ---------------------------------------------------------------- closed forms

namespace detail {

inline cplx phase(double theta) { return {std::cos(theta), std::sin(theta)}; }

inline void require_definite(const SeparableJsa& jsa, const char* who) {
    if (jsa.symmetry == SymmetryClass::anyonic)
        throw std::invalid_argument(std::string(who) +
                                    ": no closed form for anyonic exchange symmetry; "
                                    "evaluate with the oracle instead");
}

/// rms width of |f|^2 about its mean offset.
inline double rms_width(const SpectralFunction& f) {
    double m0 = 0.0, m1 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double p = std::norm(f.value(i));
        const double x = f.grid().offset(i);
        m0 += p;
        m1 += p * x;
        m2 += p * x * x;
    }
    const double mean = m1 / m0;
    return std::sqrt(std::max(m2 / m0 - mean * mean, 0.0));
}

inline void require_far_regime(const SeparableJsa& jsa, double tau0, const char* who) {
    const double sigma = (jsa.symmetry == SymmetryClass::antisymmetric)
                             ? rms_width(jsa.phasematch)
                             : rms_width(jsa.pump);
    if (sigma * std::abs(tau0) < 8.0 - 1e-9)
        throw std::invalid_argument(std::string(who) + ": sigma*tau0 = " +
                                    std::to_string(sigma * std::abs(tau0)) +
                                    " below the far-regime bound 8; need |tau0| >= " +
                                    std::to_string(8.0 / sigma));
}

}  // namespace detail

/// R = 1/2 (1 - Re[e^{-i phi} W(tau, mu/2)]); valid for any phasematch parity.
inline double hom_closed(const SeparableJsa& jsa, double tau, double mu, double phi) {
    const cplx w = wigner_minus(jsa.phasematch, tau, 0.5 * mu);
    return 0.5 * (1.0 - (detail::phase(-phi) * w).real());
}

/// Symmetric: R = 1/2 (1 + Re[e^{-i phi} F+(mu, 2 tau)]);
/// antisymmetric: R = 1/2 (1 + Re[e^{-i phi} e^{-i mu tau / 2} F-(mu, 2 tau)]).
inline double noon_closed(const SeparableJsa& jsa, double tau, double mu, double phi) {
    detail::require_definite(jsa, "noon_closed");
    cplx x;
    if (jsa.symmetry == SymmetryClass::symmetric)
        x = stft_plus(jsa.pump, mu, tau);
    else
        x = detail::phase(-0.5 * mu * tau) * stft_minus(jsa.phasematch, mu, tau);
    return 0.5 * (1.0 + (detail::phase(-phi) * x).real());
}

/// Stage-1 fringe coefficients: Fourier transforms of |f|^2 at 2 tau0.
/// These equal the mu = 0 STFTs at reversed/forward time argument.
inline cplx pump_fringe(const SpectralFunction& fp, double tau0) {
    return stft_plus(fp, 0.0, -tau0);
}
inline cplx phasematch_fringe(const SpectralFunction& fm, double tau0) {
    return stft_minus(fm, 0.0, tau0);
}

namespace detail {

inline double combo_closed_impl(const SeparableJsa& jsa, double tau0, double tau, double mu,
                                double phi, bool far) {
    const cplx e = phase(-phi);
    if (jsa.symmetry == SymmetryClass::symmetric) {
        const cplx fp0 = stft_plus(jsa.pump, mu, tau);
        const cplx c = phase(-0.5 * mu * tau) * stft_minus(jsa.phasematch, mu, tau);
        const cplx lm = stft_plus(jsa.pump, mu, tau - tau0);
        const cplx lp = stft_plus(jsa.pump, mu, tau + tau0);
        double r = 0.5 - 0.25 * (e * fp0).real() - 0.25 * (e * c).real() +
                   0.125 * (e * lm).real() + 0.125 * (e * lp).real();
        if (!far) r -= 0.25 * pump_fringe(jsa.pump, tau0).real() * (e * c).real();
        return r;
    }
    const cplx fp0 = stft_plus(jsa.pump, mu, tau);
    const cplx c = phase(-0.5 * mu * tau) * stft_minus(jsa.phasematch, mu, tau);
    // side lobes carry the extra e^{-+ i mu tau0} from the delayed-path cluster
    const cplx lp = phase(-0.5 * mu * tau) * phase(-mu * tau0) *
                    stft_minus(jsa.phasematch, mu, tau + tau0);
    const cplx lm = phase(-0.5 * mu * tau) * phase(+mu * tau0) *
                    stft_minus(jsa.phasematch, mu, tau - tau0);
    double r = 0.5 + 0.25 * (e * fp0).real() + 0.25 * (e * c).real() +
               0.125 * (e * lp).real() + 0.125 * (e * lm).real();
    if (!far) r -= 0.25 * phasematch_fringe(jsa.phasematch, tau0).real() * (e * fp0).real();
    return r;
}

}  // namespace detail

/// Five-term closed form including the Re[P] * Re[...] stage-1 cross term.
inline double combo_closed_exact(const SeparableJsa& jsa, double tau0, double tau, double mu,
                                 double phi) {
    detail::require_definite(jsa, "combo_closed_exact");
    return detail::combo_closed_impl(jsa, tau0, tau, mu, phi, false);
}

/// Far form (P term dropped); requires sigma * tau0 >= 8 for the lobe-carrying width.
inline double combo_closed_far(const SeparableJsa& jsa, double tau0, double tau, double mu,
                               double phi) {
    detail::require_definite(jsa, "combo_closed_far");
    detail::require_far_regime(jsa, tau0, "combo_closed_far");
    return detail::combo_closed_impl(jsa, tau0, tau, mu, phi, true);
}

// -------------------------------------------------------------------- oracles

namespace detail {

/// Dense complex matrix with row-major storage, sized n x n.
struct Mat {
    std::size_t n = 0;
    std::vector<cplx> v;
    explicit Mat(std::size_t n_) : n(n_), v(n_ * n_) {}
    cplx& operator()(std::size_t r, std::size_t c) { return v[r * n + c]; }
    cplx operator()(std::size_t r, std::size_t c) const { return v[r * n + c]; }
};

/// G[r, c] = F_interp[r + delta, c] (rows sampled at shifted index, zero
/// outside). Throws when the shift pushes significant mass off the grid.
inline Mat shifted_rows(const GeneralJsa& jsa, double delta, const char* who) {
    const std::size_t n = jsa.count();
    Mat g(n);
    const double n1 = static_cast<double>(n - 1);
    double lost = 0.0, total = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        const double t = static_cast<double>(r) + delta;
        const double tr = std::round(t);
        const bool exact = std::abs(t - tr) < 1e-9;
        double rowmass = 0.0;
        for (std::size_t c = 0; c < n; ++c) rowmass += std::norm(jsa.value(r, c));
        total += rowmass;
        if (t < -1e-9 || t > n1 + 1e-9) {
            lost += rowmass;  // this source row has no image on the shifted grid
            continue;
        }
        if (exact) {
            const auto i = static_cast<std::size_t>(std::clamp(tr, 0.0, n1));
            for (std::size_t c = 0; c < n; ++c) g(r, c) = jsa.value(i, c);
        } else {
            const auto i = static_cast<std::size_t>(std::floor(t));
            const double fr = t - static_cast<double>(i);
            const std::size_t i2 = std::min(i + 1, n - 1);
            for (std::size_t c = 0; c < n; ++c)
                g(r, c) = jsa.value(i, c) * (1.0 - fr) + jsa.value(i2, c) * fr;
        }
    }
    if (total > 0.0 && lost > 1e-9 * total)
        throw std::invalid_argument(
            std::string(who) + ": frequency shift " + std::to_string(delta * jsa.grid().spacing) +
            " rad/s pushes " + std::to_string(lost / total) +
            " of the JSA mass off the grid; widen the grid span by at least " +
            std::to_string(std::abs(delta) * jsa.grid().spacing) + " rad/s");
    return g;
}

inline Mat shifted_cols(const Mat& m, double delta) {
    const std::size_t n = m.n;
    Mat g(n);
    const double n1 = static_cast<double>(n - 1);
    for (std::size_t c = 0; c < n; ++c) {
        const double t = static_cast<double>(c) + delta;
        if (t < -1e-9 || t > n1 + 1e-9) continue;
        const double tr = std::round(t);
        if (std::abs(t - tr) < 1e-9) {
            const auto i = static_cast<std::size_t>(std::clamp(tr, 0.0, n1));
            for (std::size_t r = 0; r < n; ++r) g(r, c) = m(r, i);
        } else {
            const auto i = static_cast<std::size_t>(std::floor(t));
            const double fr = t - static_cast<double>(i);
            const std::size_t i2 = std::min(i + 1, n - 1);
            for (std::size_t r = 0; r < n; ++r) g(r, c) = m(r, i) * (1.0 - fr) + m(r, i2) * fr;
        }
    }
    return g;
}

/// Shifted copies of f used by the oracles, for one value of mu.
struct ShiftedJsa {
    Mat f00, fs0, f0i, fsi;
    ShiftedJsa(const GeneralJsa& jsa, double mu, const char* who)
        : f00(jsa.count()), fs0(jsa.count()), f0i(jsa.count()), fsi(jsa.count()) {
        const double d = mu / jsa.grid().spacing;
        f00.v = jsa.values();
        fs0 = shifted_rows(jsa, -d, who);   // f(xs - mu, xi)
        f0i = shifted_cols(f00, -d);        // f(xs, xi - mu)
        fsi = shifted_cols(fs0, -d);        // f(xs - mu, xi - mu)
    }
};

/// 2D Simpson weights and phase vectors shared by the oracle evaluations.
struct OracleWork {
    std::vector<double> w;       // 1D quadrature weights
    std::vector<double> x;       // baseband offsets
    explicit OracleWork(const FrequencyGrid& g)
        : w(quad_weights(g.count, g.spacing)), x(g.count) {
        for (std::size_t i = 0; i < g.count; ++i) x[i] = g.offset(i);
    }
    std::vector<cplx> phase_vec(double alpha) const {
        std::vector<cplx> p(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) p[i] = phase(alpha * x[i]);
        return p;
    }
};

inline double weighted_norm2(const Mat& a, const std::vector<double>& w) {
    double acc = 0.0;
    for (std::size_t r = 0; r < a.n; ++r) {
        double row = 0.0;
        for (std::size_t c = 0; c < a.n; ++c) row += w[c] * std::norm(a(r, c));
        acc += w[r] * row;
    }
    return acc;
}

}  // namespace detail

/// Brute-force double integral of the generalized HOM coincidence amplitude
///   R = iint | (f(wi+mu, ws) e^{-i ws tau} - e^{i phi} f(ws+mu, wi) e^{-i wi tau}) / 2 |^2.
/// Signal and idler axes must share the grid; carriers cancel between the arms.
inline double hom_oracle(const GeneralJsa& jsa, double tau, double mu, double phi) {
    detail::check_kernel_resolution(tau, jsa.grid().spacing, "hom_oracle");
    const std::size_t n = jsa.count();
    detail::OracleWork wk(jsa.grid());
    // T2[s,i] = f(xs + mu, xi); T1 = T2^T = f(xi + mu, xs)
    const detail::Mat t2 = detail::shifted_rows(jsa, mu / jsa.grid().spacing, "hom_oracle");
    const auto ps = wk.phase_vec(-tau);
    const cplx ephi = detail::phase(phi);
    detail::Mat a(n);
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t i = 0; i < n; ++i)
            a(s, i) = 0.5 * (t2(i, s) * ps[s] - ephi * t2(s, i) * ps[i]);
    return detail::weighted_norm2(a, wk.w);
}

/// Generalized N00N-interferometer oracle: four-path amplitude with the
/// displacement applied in one arm, reducing exactly to noon_closed for
/// definite exchange symmetry and defined by the same interference model
/// for anyonic states.
inline double noon_oracle(const GeneralJsa& jsa, double tau, double mu, double phi) {
    detail::check_kernel_resolution(tau, jsa.grid().spacing, "noon_oracle");
    const std::size_t n = jsa.count();
    detail::OracleWork wk(jsa.grid());
    const detail::ShiftedJsa sh(jsa, mu, "noon_oracle");
    const double c = jsa.grid().carrier;
    // theta_U = (S - mu) tau - phi with S = xs + xi + 2c
    const auto u = wk.phase_vec(tau);
    // theta_1/2 = +-(E - phi)/2, E = -(xs - xi) tau + mu tau / 2
    const auto h = wk.phase_vec(-0.5 * tau);
    const cplx gU = detail::phase((2.0 * c - mu) * tau - phi);
    const cplx g1 = detail::phase(0.25 * mu * tau - 0.5 * phi);
    const cplx g2 = std::conj(g1);
    detail::Mat a(n);
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t i = 0; i < n; ++i) {
            const cplx thU = gU * u[s] * u[i];
            const cplx th1 = g1 * h[s] * std::conj(h[i]);
            const cplx th2 = g2 * std::conj(h[s]) * h[i];
            a(s, i) = 0.25 * (thU * (sh.fsi(s, i) + sh.fsi(i, s)) +
                              (sh.f00(s, i) + sh.f00(i, s)) +
                              th1 * (sh.fs0(s, i) - sh.f0i(i, s)) +
                              th2 * (sh.f0i(s, i) - sh.fs0(i, s)));
        }
    }
    return detail::weighted_norm2(a, wk.w);
}

/// Generalized combination-interferometer oracle: 16 path pairs through the
/// two cascaded stages (delay tau0, then displacement by (mu, tau)), with the
/// bracket sign tables of the coincidence expansion.
inline double combo_oracle(const GeneralJsa& jsa, double tau0, double tau, double mu, double phi) {
    detail::check_kernel_resolution(std::abs(tau) + std::abs(tau0), jsa.grid().spacing,
                                    "combo_oracle");
    const std::size_t n = jsa.count();
    detail::OracleWork wk(jsa.grid());
    const detail::ShiftedJsa sh(jsa, mu, "combo_oracle");
    const double c = jsa.grid().carrier;

    // path order: 0 = DS, 1 = DP, 2 = PS, 3 = PP  (stage-1 delay D/P, stage-2 shift S/P)
    static constexpr int s1[4] = {+1, +1, +1, -1};
    static constexpr int i1[4] = {+1, -1, -1, -1};
    static constexpr int cs[4] = {+1, +1, -1, +1};
    static constexpr int ci[4] = {+1, -1, +1, +1};
    const auto has_shift = [](int p) { return p == 0 || p == 2; };
    const auto has_delay = [](int p) { return p == 0 || p == 1; };

    const auto pick = [&](int p, int q) -> const detail::Mat& {
        if (has_shift(p) && has_shift(q)) return sh.fsi;
        if (has_shift(p)) return sh.fs0;
        if (has_shift(q)) return sh.f0i;
        return sh.f00;
    };

    // base phases: (S,S): alpha=beta=tau, gamma=(2c-mu)tau - phi
    //              (S,P): alpha=-tau/2, beta=+tau/2, gamma=mu tau/4 - phi/2 ; (P,S) conjugate
    // cluster offsets: both stage-1 delayed: -(S-mu) tau0 ;  s-only delayed: -(xs-xi) tau0
    detail::Mat a(n);
    std::vector<cplx> us(n), vs(n);
    for (int p = 0; p < 4; ++p) {
        for (int q = 0; q < 4; ++q) {
            double alpha, beta, gamma;
            const bool pS = has_shift(p), qS = has_shift(q);
            if (pS && qS) { alpha = tau; beta = tau; gamma = (2.0 * c - mu) * tau - phi; }
            else if (pS)  { alpha = -0.5 * tau; beta = 0.5 * tau; gamma = 0.25 * mu * tau - 0.5 * phi; }
            else if (qS)  { alpha = 0.5 * tau; beta = -0.5 * tau; gamma = -0.25 * mu * tau + 0.5 * phi; }
            else          { alpha = 0.0; beta = 0.0; gamma = 0.0; }
            if (has_delay(p) && has_delay(q)) {
                alpha -= tau0; beta -= tau0; gamma -= (2.0 * c - mu) * tau0;
            } else if (has_delay(p)) {
                alpha -= tau0; beta += tau0;
            }
            const double w1 = s1[p] * i1[q], w2 = cs[p] * ci[q];
            const detail::Mat& m = pick(p, q);
            const detail::Mat& mt = pick(q, p);
            const cplx g = detail::phase(gamma);
            for (std::size_t k = 0; k < n; ++k) {
                us[k] = detail::phase(alpha * wk.x[k]);
                vs[k] = detail::phase(beta * wk.x[k]);
            }
            for (std::size_t s = 0; s < n; ++s) {
                const cplx gs = g * us[s];
                for (std::size_t i = 0; i < n; ++i)
                    a(s, i) += gs * vs[i] * (w1 * m(s, i) + w2 * mt(i, s));
            }
        }
    }
    for (cplx& z : a.v) z *= 0.125;
    return detail::weighted_norm2(a, wk.w);
}

// ------------------------------------------------------------------- run_scan

using JsaSource = std::variant<SeparableJsa, GeneralJsa>;

namespace detail {

inline double eval_point(const ScanConfig& cfg, const JsaSource& src, Provenance prov, double tau,
                         double mu) {
    if (prov == Provenance::oracle) {
        const auto* gen = std::get_if<GeneralJsa>(&src);
        require(gen != nullptr, "run_scan: oracle provenance requires a GeneralJsa "
                                "(convert with to_general)");
        switch (cfg.kind) {
            case InterferometerKind::hom: return hom_oracle(*gen, tau, mu, cfg.arm_phase);
            case InterferometerKind::noon: return noon_oracle(*gen, tau, mu, cfg.arm_phase);
            default: return combo_oracle(*gen, cfg.tau0, tau, mu, cfg.arm_phase);
        }
    }
    const auto* sep = std::get_if<SeparableJsa>(&src);
    require(sep != nullptr, "run_scan: closed-form provenance requires a SeparableJsa");
    switch (cfg.kind) {
        case InterferometerKind::hom: return hom_closed(*sep, tau, mu, cfg.arm_phase);
        case InterferometerKind::noon: return noon_closed(*sep, tau, mu, cfg.arm_phase);
        default:
            return (prov == Provenance::closed_far)
                       ? combo_closed_far(*sep, cfg.tau0, tau, mu, cfg.arm_phase)
                       : combo_closed_exact(*sep, cfg.tau0, tau, mu, cfg.arm_phase);
    }
}

inline unsigned thread_count() {
    if (const char* env = std::getenv("BIPHOTON_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    return 1;
}

}  // namespace detail

/// Sweeps the requested evaluator over the (tau, mu) lattice. Points are
/// independent; with Poisson noise each point draws from its own stream
/// seeded by (seed, j, k), so the result does not depend on scheduling.
inline CoincidenceScan run_scan(const ScanConfig& config, const JsaSource& source,
                                Provenance provenance) {
    config.validate();
    const std::size_t nt = config.tau_grid.count, nm = config.mu_grid.count;
    CoincidenceScan scan;
    scan.config = config;
    scan.provenance = provenance;
    scan.values.assign(nt * nm, 0.0);

    const unsigned threads = std::min<unsigned>(detail::thread_count(), nt);
    auto worker = [&](std::size_t j0, std::size_t j1) {
        for (std::size_t j = j0; j < j1; ++j) {
            const double tau = config.tau_grid.value(j);
            for (std::size_t k = 0; k < nm; ++k) {
                const double mu = config.mu_grid.offset(k);
                double r = detail::eval_point(config, source, provenance, tau, mu);
                detail::require(r >= -1e-9 && r <= 1.0 + 1e-9,
                                "run_scan: coincidence probability " + std::to_string(r) +
                                    " outside [0, 1] at tau = " + std::to_string(tau) +
                                    ", mu = " + std::to_string(mu));
                if (config.noise.poisson) {
                    const double rc = std::clamp(r, 0.0, 1.0);
                    const double pairs = static_cast<double>(config.noise.pairs_per_setting);
                    SplitMix64 rng(SplitMix64::mix(SplitMix64::mix(config.noise.seed, j), k));
                    const auto c1 = poisson_sample(rng, pairs * rc);
                    const auto c2 = poisson_sample(rng, pairs * (1.0 - rc));
                    r = (c1 + c2 == 0) ? 0.5
                                       : static_cast<double>(c1) / static_cast<double>(c1 + c2);
                }
                scan.values[j * nm + k] = r;
            }
        }
    };
    if (threads <= 1) {
        worker(0, nt);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (nt + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::size_t j0 = t * chunk, j1 = std::min(nt, j0 + chunk);
            if (j0 >= j1) break;
            pool.emplace_back(worker, j0, j1);
        }
        for (auto& th : pool) th.join();
    }
    return scan;
}

}  // namespace biphoton
