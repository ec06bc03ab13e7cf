#include <catch2/catch_amalgamated.hpp>

#include "biphoton/quadrature.hpp"
#include "biphoton/spectral.hpp"

using namespace biphoton;

namespace {

ComplexSamples sampled(std::size_t n, double a, double b, auto f) {
    const double h = (b - a) / static_cast<double>(n - 1);
    std::vector<cplx> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = f(a + static_cast<double>(i) * h);
    return ComplexSamples(std::move(v), h, a);
}

}  // namespace

TEST_CASE("integrate_1d: constant over the span", "[core]") {
    auto s = sampled(101, -3.0, 5.0, [](double) { return cplx(1.0, 0.0); });
    REQUIRE(std::abs(integrate_1d(s) - cplx(8.0, 0.0)) < 1e-12);
}

TEST_CASE("integrate_1d: odd integrand on a symmetric grid", "[core]") {
    auto s = sampled(257, -4.0, 4.0, [](double x) { return cplx(x * x * x, std::sin(x)); });
    REQUIRE(std::abs(integrate_1d(s)) < 1e-12 * 8.0);
}

TEST_CASE("integrate_1d: gaussian reproduces sqrt(pi)", "[core]") {
    auto s = sampled(257, -8.0, 8.0, [](double x) { return cplx(std::exp(-x * x), 0.0); });
    REQUIRE(std::abs(integrate_1d(s).real() - std::sqrt(std::numbers::pi)) < 1e-10);
}

TEST_CASE("integrate_1d: linearity", "[core]") {
    auto f = sampled(129, -2.0, 2.0, [](double x) { return cplx(std::exp(-x * x), x); });
    auto g = sampled(129, -2.0, 2.0, [](double x) { return cplx(std::cos(x), -0.3 * x * x); });
    const cplx a(0.7, -1.3), b(-2.1, 0.4);
    std::vector<cplx> mix(f.size());
    for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = a * f.values[i] + b * g.values[i];
    const cplx lhs = integrate_1d(ComplexSamples(std::move(mix), f.spacing, f.origin));
    const cplx rhs = a * integrate_1d(f) + b * integrate_1d(g);
    REQUIRE(std::abs(lhs - rhs) <= 1e-12 * std::abs(rhs));
}

TEST_CASE("integrate_1d: doubling the resolution is stable for gaussians", "[core]") {
    auto coarse = sampled(257, -8.0, 8.0, [](double x) { return cplx(std::exp(-x * x), 0.0); });
    auto fine = sampled(513, -8.0, 8.0, [](double x) { return cplx(std::exp(-x * x), 0.0); });
    const double a = integrate_1d(coarse).real(), b = integrate_1d(fine).real();
    REQUIRE(std::abs(a - b) < 1e-8 * std::abs(b));
}

TEST_CASE("integrate_1d: rejects non-finite samples with the index", "[core]") {
    auto s = sampled(65, -1.0, 1.0, [](double) { return cplx(1.0, 0.0); });
    s.values[17] = cplx(std::numeric_limits<double>::quiet_NaN(), 0.0);
    REQUIRE_THROWS_WITH(integrate_1d(s), Catch::Matchers::ContainsSubstring("17"));
}

TEST_CASE("integrate_2d: box, separability, gaussian", "[core]") {
    const std::size_t n = 65;
    std::vector<std::vector<cplx>> ones(n, std::vector<cplx>(n, cplx(1.0, 0.0)));
    const double ha = 2.0 / (n - 1), hb = 3.0 / (n - 1);
    REQUIRE(std::abs(integrate_2d(ones, ha, hb) - cplx(6.0, 0.0)) < 1e-12);

    auto g = [](double x) { return std::exp(-x * x); };
    const std::size_t m = 129;
    const double h = 16.0 / (m - 1);
    std::vector<std::vector<cplx>> sep(m, std::vector<cplx>(m));
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < m; ++c) {
            const double x = -8.0 + r * h, y = -8.0 + c * h;
            sep[r][c] = cplx(g(x) * g(y), 0.0);
        }
    const cplx two_d = integrate_2d(sep, h, h);
    auto s1 = sampled(m, -8.0, 8.0, [&](double x) { return cplx(g(x), 0.0); });
    const cplx prod = integrate_1d(s1) * integrate_1d(s1);
    REQUIRE(std::abs(two_d - prod) < 1e-12 * std::abs(prod));
    REQUIRE(std::abs(two_d.real() - std::numbers::pi) < 1e-9);
}

TEST_CASE("integrate_2d: ragged array rejected", "[core]") {
    std::vector<std::vector<cplx>> bad(4, std::vector<cplx>(4, cplx(1.0, 0.0)));
    bad[2].resize(3);
    REQUIRE_THROWS_AS(integrate_2d(bad, 0.1, 0.1), std::invalid_argument);
}

TEST_CASE("fourier_sum: zero kernel frequency reduces to integrate_1d", "[core]") {
    auto s = sampled(129, -4.0, 4.0, [](double x) { return cplx(std::exp(-x * x), 0.2 * x); });
    REQUIRE(std::abs(fourier_sum(s, 0.0) - integrate_1d(s)) == 0.0);
}

TEST_CASE("fourier_sum: gaussian pair decays as a gaussian in t", "[core]") {
    // int e^{-w^2} e^{-i w t} dw = sqrt(pi) e^{-t^2/4}
    auto s = sampled(513, -8.0, 8.0, [](double x) { return cplx(std::exp(-x * x), 0.0); });
    for (double t : {0.5, 1.0, 2.0}) {
        const cplx got = fourier_sum(s, t);
        const double want = std::sqrt(std::numbers::pi) * std::exp(-t * t / 4.0);
        REQUIRE(std::abs(got - cplx(want, 0.0)) < 1e-10);
    }
}

TEST_CASE("fourier_sum: single interior sample on an even-count grid", "[core]") {
    // Even count -> trapezoid weights, interior weight exactly h.
    const std::size_t n = 128;
    std::vector<cplx> v(n, cplx(0.0, 0.0));
    const double h = 0.125, x0 = -4.0;
    v[40] = cplx(0.7, -0.2);
    ComplexSamples s(std::move(v), h, x0);
    const double w0 = x0 + 40 * h;
    const double t = 1.7;
    const cplx want = cplx(0.7, -0.2) * h * cplx(std::cos(w0 * t), -std::sin(w0 * t));
    REQUIRE(std::abs(fourier_sum(s, t) - want) < 1e-15);
}

TEST_CASE("fourier_sum: conjugation identity", "[core]") {
    auto s = sampled(257, -6.0, 6.0,
                     [](double x) { return cplx(std::exp(-x * x / 4.0), 0.3 * x); });
    std::vector<cplx> conj(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) conj[i] = std::conj(s.values[i]);
    ComplexSamples sc(std::move(conj), s.spacing, s.origin);
    for (double t : {-1.3, 0.4, 2.2}) {
        const cplx lhs = fourier_sum(sc, -t);
        const cplx rhs = std::conj(fourier_sum(s, t));
        REQUIRE(std::abs(lhs - rhs) < 1e-14);
    }
}

TEST_CASE("FrequencyGrid: symmetric offsets, invariants enforced", "[core]") {
    FrequencyGrid g(33, 0.25, 10.0);
    for (std::size_t i = 0; i < g.count; ++i)
        REQUIRE(g.offset(i) == -g.offset(g.count - 1 - i));
    REQUIRE_THROWS_AS(FrequencyGrid(8, 0.25), std::invalid_argument);
    REQUIRE_THROWS_AS(FrequencyGrid(33, -1.0), std::invalid_argument);
}

TEST_CASE("make_gaussian: parity, norm, chirp phase", "[core]") {
    FrequencyGrid g(257, 1.0 / 16.0);
    auto f = make_gaussian(g, 0.0, 1.0);
    for (std::size_t i = 0; i < f.size(); ++i) {
        REQUIRE(f.value(i).imag() == 0.0);
        REQUIRE(f.value(i) == f.value(f.size() - 1 - i));
    }
    REQUIRE(std::abs(f.norm() - 1.0) < 1e-9);

    auto fc = make_gaussian(g, 0.0, 1.0, 0.3);
    // phase at offset 2 from center: chirp * 2^2 = 1.2 rad
    const std::size_t i2 = 128 + 32;
    REQUIRE(std::abs(std::arg(fc.value(i2)) - 1.2) < 1e-12);

    FrequencyGrid narrow(16, 0.25);  // span 3.75 < 6 sigma
    REQUIRE_THROWS_AS(make_gaussian(narrow, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("make_hermite_gauss: order 1 is exactly odd, order 0 is gaussian", "[core]") {
    FrequencyGrid g(257, 1.0 / 16.0);
    auto f1 = make_hermite_gauss(g, 1, 1.0);
    REQUIRE(f1.value(128) == cplx(0.0, 0.0));
    for (std::size_t i = 0; i < f1.size(); ++i)
        REQUIRE(f1.value(i) == -f1.value(f1.size() - 1 - i));
    auto f0 = make_hermite_gauss(g, 0, 1.0);
    auto gz = make_gaussian(g, 0.0, 1.0, 0.0);
    for (std::size_t i = 0; i < f0.size(); ++i)
        REQUIRE(std::abs(f0.value(i) - gz.value(i)) < 1e-15);
    REQUIRE_THROWS_AS(make_hermite_gauss(g, 2, 1.0), std::invalid_argument);
}

TEST_CASE("make_sinc: peak at zero, even, unit norm", "[core]") {
    FrequencyGrid g(257, 1.0 / 8.0);
    auto f = make_sinc(g, 1.0);
    double maxabs = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) maxabs = std::max(maxabs, std::abs(f.value(i)));
    REQUIRE(std::abs(f.value(128)) == maxabs);
    for (std::size_t i = 0; i < f.size(); ++i)
        REQUIRE(f.value(i) == f.value(f.size() - 1 - i));
    REQUIRE(std::abs(f.norm() - 1.0) < 1e-9);
}

TEST_CASE("SpectralFunction: interpolation hits samples exactly", "[core]") {
    FrequencyGrid g(64, 0.5);
    auto f = make_gaussian(g, 0.0, 2.0);
    for (std::size_t i = 0; i < f.size(); ++i)
        REQUIRE(f.sample_at(g.offset(i)) == f.value(i));
    REQUIRE(f.sample_at(g.offset(0) - 1.0) == cplx(0.0, 0.0));
}
