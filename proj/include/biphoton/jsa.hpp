#pragma once

#include <optional>
#include <string>

#include "biphoton/spectral.hpp"

namespace biphoton {

enum class SymmetryClass { symmetric, antisymmetric, anyonic };

inline const char* to_string(SymmetryClass s) {
    switch (s) {
        case SymmetryClass::symmetric: return "symmetric";
        case SymmetryClass::antisymmetric: return "antisymmetric";
        default: return "anyonic";
    }
}

namespace detail {

/// Numeric parity of a spectral function on its symmetric grid:
/// +1 if f(-w)=f(w), -1 if f(-w)=-f(w) within `tol` max deviation, else nullopt.
inline std::optional<int> numeric_parity(const SpectralFunction& f, double tol = 1e-9) {
    const std::size_t n = f.size();
    double dev_even = 0.0, dev_odd = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const cplx a = f.value(i), b = f.value(n - 1 - i);
        dev_even = std::max(dev_even, std::abs(a - b));
        dev_odd = std::max(dev_odd, std::abs(a + b));
    }
    if (dev_even <= tol) return +1;
    if (dev_odd <= tol) return -1;
    return std::nullopt;
}

}  // namespace detail

/// Factorized JSA: f(ws, wi) = pump((ws+wi)/2) * phasematch((ws-wi)/2).
/// The exchange symmetry is carried entirely by the phasematch parity.
struct SeparableJsa {
    SpectralFunction pump;        // the w+ axis; carrier = absolute center
    SpectralFunction phasematch;  // the w- axis; carrier 0 (degenerate pairs)
    SymmetryClass symmetry = SymmetryClass::anyonic;

    SeparableJsa(SpectralFunction p, SpectralFunction m)
        : pump(std::move(p)), phasematch(std::move(m)) {
        const auto parity = detail::numeric_parity(phasematch);
        if (parity.has_value())
            symmetry = (*parity > 0) ? SymmetryClass::symmetric : SymmetryClass::antisymmetric;
        else
            symmetry = SymmetryClass::anyonic;
    }
};

/// Full 2D JSA on square axes (grid_s == grid_i required by every consumer),
/// unit 2D L2 norm. Values are row-major, value(i_s, i_i).
class GeneralJsa {
  public:
    GeneralJsa(FrequencyGrid grid, std::vector<cplx> values)
        : grid_(grid), values_(std::move(values)) {
        detail::require(values_.size() == grid_.count * grid_.count,
                        "GeneralJsa: value count does not match square grid");
        detail::check_finite(std::span<const cplx>(values_), "GeneralJsa");
        normalize();
    }

    const FrequencyGrid& grid() const { return grid_; }
    std::size_t count() const { return grid_.count; }
    const std::vector<cplx>& values() const { return values_; }
    cplx value(std::size_t s, std::size_t i) const { return values_[s * grid_.count + i]; }
    cplx& at(std::size_t s, std::size_t i) { return values_[s * grid_.count + i]; }

    double norm2() const {
        double acc = 0.0;
        for (const cplx& v : values_) acc += std::norm(v);
        return acc * grid_.spacing * grid_.spacing;
    }

    double last_renormalization() const { return renorm_; }

  private:
    void normalize() {
        const double n = std::sqrt(norm2());
        detail::require(n > 0.0, "GeneralJsa: zero norm");
        for (cplx& v : values_) v /= n;
        renorm_ = 1.0 / n;
    }

    FrequencyGrid grid_;
    std::vector<cplx> values_;
    double renorm_ = 1.0;
};

/// Builds the 2D grid f(ws,wi) = pump((ws+wi)/2) * phasematch((ws-wi)/2) by
/// linear interpolation of the 1D samples, renormalized to unit 2D norm.
/// The grid carrier is the pump carrier (signal and idler share it).
inline GeneralJsa to_general(const SeparableJsa& jsa, const FrequencyGrid& grid) {
    const double half = grid.half_span();
    detail::require(jsa.pump.support_radius() <= half + 1e-12 &&
                        jsa.phasematch.support_radius() <= half + 1e-12,
                    "to_general: target grid does not cover the factor supports");
    const std::size_t n = grid.count;
    std::vector<cplx> v(n * n);
    double lost = 0.0, total = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
        const double xs = grid.offset(s);
        for (std::size_t i = 0; i < n; ++i) {
            const double xi = grid.offset(i);
            const double up = 0.5 * (xs + xi), um = 0.5 * (xs - xi);
            const cplx val = jsa.pump.sample_at(up) * jsa.phasematch.sample_at(um);
            v[s * n + i] = val;
            total += std::norm(val);
            if (std::abs(up) > jsa.pump.grid().half_span() ||
                std::abs(um) > jsa.phasematch.grid().half_span())
                lost += std::norm(val);
        }
    }
    detail::require(total > 0.0 && lost <= 1e-6 * total,
                    "to_general: support leakage beyond the factor grids");
    FrequencyGrid g(grid.count, grid.spacing, jsa.pump.grid().carrier);
    return GeneralJsa(g, std::move(v));
}

/// Transposed value array (ws <-> wi).
inline GeneralJsa exchange(const GeneralJsa& jsa) {
    const std::size_t n = jsa.count();
    std::vector<cplx> v(n * n);
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t i = 0; i < n; ++i) v[i * n + s] = jsa.value(s, i);
    return GeneralJsa(jsa.grid(), std::move(v));
}

/// Overlap Re<f, exchange(f)> and the symmetry class it implies.
inline std::pair<SymmetryClass, double> classify_symmetry(const GeneralJsa& jsa) {
    const std::size_t n = jsa.count();
    cplx acc(0.0, 0.0);
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t i = 0; i < n; ++i) acc += std::conj(jsa.value(s, i)) * jsa.value(i, s);
    const double score = acc.real() * jsa.grid().spacing * jsa.grid().spacing;
    SymmetryClass c = SymmetryClass::anyonic;
    if (score > 1.0 - 1e-6) c = SymmetryClass::symmetric;
    else if (score < -1.0 + 1e-6) c = SymmetryClass::antisymmetric;
    return {c, score};
}

/// Normalized f + sign * exchange(f). Rejects degenerate symmetrization
/// (e.g. antisymmetrizing an already symmetric state).
inline GeneralJsa symmetrize(const GeneralJsa& jsa, int sign) {
    detail::require(sign == 1 || sign == -1, "symmetrize: sign must be +-1");
    const std::size_t n = jsa.count();
    std::vector<cplx> v(n * n);
    double acc = 0.0;
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t i = 0; i < n; ++i) {
            const cplx val = jsa.value(s, i) + static_cast<double>(sign) * jsa.value(i, s);
            v[s * n + i] = val;
            acc += std::norm(val);
        }
    detail::require(acc * jsa.grid().spacing * jsa.grid().spacing > 1e-12,
                    "symmetrize: degenerate symmetrization (result is numerically zero)");
    return GeneralJsa(jsa.grid(), std::move(v));
}

/// |<a,b>|^2 for two general JSAs on the same grid.
inline double overlap2(const GeneralJsa& a, const GeneralJsa& b) {
    detail::require(a.grid() == b.grid(), "overlap2: grid mismatch");
    cplx acc(0.0, 0.0);
    for (std::size_t k = 0; k < a.values().size(); ++k)
        acc += std::conj(a.values()[k]) * b.values()[k];
    acc *= a.grid().spacing * a.grid().spacing;
    return std::norm(acc);
}

}  // namespace biphoton
