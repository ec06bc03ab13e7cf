#include <catch2/catch_amalgamated.hpp>

#include "biphoton/jsa.hpp"

using namespace biphoton;

namespace {

// JSA axis spacing h with factor axes at h/2 so the change of variables
// lands exactly on factor samples.
struct Fixture {
    FrequencyGrid jgrid{257, 1.0 / 8.0, 10.0};
    FrequencyGrid fgrid{513, 1.0 / 16.0, 10.0};
    FrequencyGrid mgrid{513, 1.0 / 16.0, 0.0};
    SpectralFunction pump = make_gaussian(fgrid, 0.0, 1.0, 0.25);
    SpectralFunction even = make_gaussian(mgrid, 0.0, 1.0);
    SpectralFunction odd = make_hermite_gauss(mgrid, 1, 1.0);
};

SpectralFunction mix_parityless(const Fixture& fx) {
    std::vector<cplx> v(fx.mgrid.count);
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = fx.even.value(i) + 0.8 * fx.odd.value(i);
    return SpectralFunction(fx.mgrid, std::move(v));
}

}  // namespace

TEST_CASE("SeparableJsa: symmetry tracks the phasematch parity", "[jsa]") {
    Fixture fx;
    REQUIRE(SeparableJsa(fx.pump, fx.even).symmetry == SymmetryClass::symmetric);
    REQUIRE(SeparableJsa(fx.pump, fx.odd).symmetry == SymmetryClass::antisymmetric);
    REQUIRE(SeparableJsa(fx.pump, mix_parityless(fx)).symmetry == SymmetryClass::anyonic);
}

TEST_CASE("to_general: transposition symmetry and norm", "[jsa]") {
    Fixture fx;
    auto js = to_general(SeparableJsa(fx.pump, fx.even), fx.jgrid);
    auto ja = to_general(SeparableJsa(fx.pump, fx.odd), fx.jgrid);
    const std::size_t n = js.count();
    double dev_s = 0.0, dev_a = 0.0;
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t i = 0; i < n; ++i) {
            dev_s = std::max(dev_s, std::abs(js.value(s, i) - js.value(i, s)));
            dev_a = std::max(dev_a, std::abs(ja.value(s, i) + ja.value(i, s)));
        }
    REQUIRE(dev_s < 1e-9);
    REQUIRE(dev_a < 1e-9);
    REQUIRE(std::abs(js.norm2() - 1.0) < 1e-8);
}

TEST_CASE("to_general: rejects grids that lose support", "[jsa]") {
    Fixture fx;
    FrequencyGrid tiny(16, 1.0 / 8.0, 10.0);  // span 1.875, far below the factor support
    REQUIRE_THROWS_AS(to_general(SeparableJsa(fx.pump, fx.even), tiny), std::invalid_argument);
}

TEST_CASE("exchange: involution and fixed points", "[jsa]") {
    Fixture fx;
    auto js = to_general(SeparableJsa(fx.pump, fx.even), fx.jgrid);
    auto back = exchange(exchange(js));
    double dev = 0.0;
    for (std::size_t k = 0; k < js.values().size(); ++k)
        dev = std::max(dev, std::abs(js.values()[k] - back.values()[k]));
    REQUIRE(dev == 0.0);
    REQUIRE(overlap2(js, exchange(js)) > 1.0 - 1e-9);
    // anyonic state: overlap with its exchange strictly below one
    auto jx = to_general(SeparableJsa(fx.pump, mix_parityless(fx)), fx.jgrid);
    REQUIRE(overlap2(jx, exchange(jx)) < 1.0 - 1e-3);
}

TEST_CASE("classify_symmetry: scores for pure and mixed parity", "[jsa]") {
    Fixture fx;
    auto js = to_general(SeparableJsa(fx.pump, fx.even), fx.jgrid);
    auto ja = to_general(SeparableJsa(fx.pump, fx.odd), fx.jgrid);
    auto [cs, ss] = classify_symmetry(js);
    auto [ca, sa] = classify_symmetry(ja);
    REQUIRE(cs == SymmetryClass::symmetric);
    REQUIRE(std::abs(ss - 1.0) < 1e-9);
    REQUIRE(ca == SymmetryClass::antisymmetric);
    REQUIRE(std::abs(sa + 1.0) < 1e-9);

    // equal superposition scores ~0: (fs + fa)/sqrt(2)
    const std::size_t n = js.count();
    std::vector<cplx> v(n * n);
    for (std::size_t k = 0; k < v.size(); ++k)
        v[k] = (js.values()[k] + ja.values()[k]) / std::sqrt(2.0);
    GeneralJsa mixjsa(js.grid(), std::move(v));
    auto [cm, sm] = classify_symmetry(mixjsa);
    REQUIRE(cm == SymmetryClass::anyonic);
    REQUIRE(std::abs(sm) < 1e-6);
}

TEST_CASE("symmetrize: projections and degenerate rejection", "[jsa]") {
    Fixture fx;
    auto js = to_general(SeparableJsa(fx.pump, fx.even), fx.jgrid);
    auto ja = to_general(SeparableJsa(fx.pump, fx.odd), fx.jgrid);

    auto sym = symmetrize(js, +1);  // identity up to normalization
    REQUIRE(overlap2(sym, js) > 1.0 - 1e-10);
    REQUIRE_THROWS_AS(symmetrize(js, -1), std::invalid_argument);

    // anyonic input: antisymmetrization recovers the odd component
    const std::size_t n = js.count();
    std::vector<cplx> v(n * n);
    for (std::size_t k = 0; k < v.size(); ++k)
        v[k] = js.values()[k] + 0.7 * ja.values()[k];
    GeneralJsa any(js.grid(), std::move(v));
    auto anti = symmetrize(any, -1);
    auto [c, score] = classify_symmetry(anti);
    REQUIRE(c == SymmetryClass::antisymmetric);
    REQUIRE(score < -1.0 + 1e-6);
    REQUIRE(overlap2(anti, ja) > 1.0 - 1e-10);
}

TEST_CASE("to_general commutes with phasematch parity flip", "[jsa]") {
    Fixture fx;
    // exchanging after construction == constructing with f-(-w)
    auto ja = to_general(SeparableJsa(fx.pump, fx.odd), fx.jgrid);
    auto ex = exchange(ja);
    std::vector<cplx> flipped(fx.mgrid.count);
    for (std::size_t i = 0; i < flipped.size(); ++i)
        flipped[i] = fx.odd.value(fx.mgrid.count - 1 - i);
    auto jneg = to_general(SeparableJsa(fx.pump, SpectralFunction(fx.mgrid, std::move(flipped))),
                           fx.jgrid);
    double dev = 0.0;
    for (std::size_t k = 0; k < ex.values().size(); ++k)
        dev = std::max(dev, std::abs(ex.values()[k] - jneg.values()[k]));
    REQUIRE(dev < 1e-8);
}

TEST_CASE("classify agrees with the declared separable symmetry", "[jsa]") {
    Fixture fx;
    for (const auto* f : {&fx.even, &fx.odd}) {
        SeparableJsa sep(fx.pump, *f);
        auto [c, score] = classify_symmetry(to_general(sep, fx.jgrid));
        REQUIRE(c == sep.symmetry);
        (void)score;
    }
}
