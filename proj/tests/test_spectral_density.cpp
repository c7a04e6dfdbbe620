#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "oracles.hpp"
#include "sdprobe/spectral_density.hpp"

using namespace sdprobe;

TEST_CASE("lorentzian peak value") {
    const auto sd = SpectralDensity::lorentzian({1.0, 1.0, 5.0});
    CHECK(eval_sd(sd, 5.0) == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-15));
    CHECK(sd.peak() == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-15));
}

TEST_CASE("lorentzian weight equals g squared") {
    const auto sd = SpectralDensity::lorentzian({2.0, 0.5, 0.0});
    CHECK(sd_integral(sd) == doctest::Approx(4.0).epsilon(1e-3));
    // Truncation at the 1e-12 tail loses only ~1e-6 relative weight.
    CHECK(std::abs(sd_integral(sd) - 4.0) < 1e-5);

    const auto narrow = SpectralDensity::lorentzian({2.0, 0.5, 0.0}, Support{-5e3, 5e3});
    CHECK(sd_integral(narrow) == doctest::Approx(4.0).epsilon(1e-3));
}

TEST_CASE("default truncation sits where the tail reaches 1e-12 of the peak") {
    const auto l = SpectralDensity::lorentzian({1.5, 0.3, 2.0});
    CHECK(l(l.support().hi) / l.peak() == doctest::Approx(1e-12).epsilon(1e-6));
    CHECK(l(l.support().lo) / l.peak() == doctest::Approx(1e-12).epsilon(1e-6));

    const auto o = SpectralDensity::ohmic({0.1, 2.0});
    CHECK(o.support().lo == 0.0);
    CHECK(o(o.support().hi) / o.peak() == doctest::Approx(1e-12).epsilon(1e-6));
}

TEST_CASE("closed forms of the other families") {
    const auto f = SpectralDensity::flat(0.2, {-1.0, 3.0});
    CHECK(f(0.0) == 0.2);
    CHECK(f(3.0) == 0.2);
    CHECK(f(3.5) == 0.0);

    const auto o = SpectralDensity::ohmic({0.05, 2.0});
    CHECK(o(1.0) == doctest::Approx(0.05 * std::exp(-0.5)).epsilon(1e-15));
    CHECK(o(-1.0) == 0.0);
    CHECK(o.peak() == doctest::Approx(0.05 * 2.0 * std::exp(-1.0)));

    const auto b = SpectralDensity::band_gap({0.4, 1.0}, 10.0);
    CHECK(b(1.0) == 0.0);
    CHECK(b(0.5) == 0.0);
    CHECK(b(5.0) == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(b(10.5) == 0.0);
    CHECK(b.support().lo == 1.0);
    CHECK(b.support().hi == 10.0);

    const auto z = SpectralDensity::zero();
    CHECK(z.is_zero());
    CHECK(z(0.3) == 0.0);
}

TEST_CASE("non-negativity and support compliance on random samples") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int n = 0; n < 100000; ++n) {
        SpectralDensity sd = SpectralDensity::zero();
        switch (n % 5) {
            case 0: sd = SpectralDensity::flat(u(rng), {-1.0 - u(rng), 1.0 + u(rng)}); break;
            case 1: sd = SpectralDensity::lorentzian({0.1 + u(rng), 0.1 + u(rng), 4 * u(rng) - 2}); break;
            case 2: sd = SpectralDensity::ohmic({u(rng), 0.5 + u(rng)}); break;
            case 3: sd = SpectralDensity::band_gap({u(rng), u(rng)}, 2.0 + u(rng)); break;
            case 4: sd = SpectralDensity::tabulated({{-1.0, 0.0, 0.5, 2.0}, {u(rng), u(rng), 0.0, u(rng)}}); break;
        }
        const Support s = sd.support();
        const double w = s.lo - 1.0 + (s.width() + 2.0) * u(rng);
        const double J = eval_sd(sd, w);
        REQUIRE(J >= 0.0);
        if (!s.contains(w)) REQUIRE(J == 0.0);
    }
}

TEST_CASE("tabulated interpolation") {
    const TabulatedSD t({0.0, 1.0, 3.0}, {0.5, 1.5, 0.25});
    const auto sd = SpectralDensity::tabulated(t);
    CHECK(sd(0.0) == 0.5);
    CHECK(sd(1.0) == 1.5);
    CHECK(sd(3.0) == 0.25);
    CHECK(sd(0.5) == doctest::Approx(1.0));
    CHECK(sd(2.0) == doctest::Approx(0.875));
    CHECK(sd(-0.1) == 0.0);
    CHECK(sd(3.1) == 0.0);
    CHECK(sd_integral(sd) == doctest::Approx(0.5 * (0.5 + 1.5) + (1.5 + 0.25)).epsilon(1e-12));
}

TEST_CASE("invalid parameters are rejected") {
    CHECK_THROWS_AS(SpectralDensity::lorentzian({0.0, 1.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(SpectralDensity::lorentzian({1.0, -1.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(SpectralDensity::flat(-0.1, {0.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(SpectralDensity::flat(0.1, {1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(SpectralDensity::ohmic({-1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(SpectralDensity::band_gap({1.0, 2.0}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(TabulatedSD({0.0}, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(TabulatedSD({0.0, 1.0}, {1.0, -1.0}), std::invalid_argument);
    CHECK_THROWS_AS(TabulatedSD({0.0, 0.0}, {1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(TabulatedSD({0.0, 1.0, 2.0}, {1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("kind names round-trip") {
    for (SdKind k : {SdKind::flat, SdKind::lorentzian, SdKind::ohmic, SdKind::band_gap, SdKind::tabulated,
                     SdKind::zero}) {
        CHECK(parse_sd_kind(to_string(k)) == k);
    }
    CHECK_THROWS_AS(parse_sd_kind("gaussian"), std::invalid_argument);
}

TEST_CASE("breakpoints are sorted and inside the support") {
    for (const auto& sd : {SpectralDensity::lorentzian({1.0, 0.2, 3.0}), SpectralDensity::ohmic({0.1, 1.0}),
                           SpectralDensity::band_gap({1.0, 0.0}, 4.0), SpectralDensity::flat(1.0, {0.0, 1.0})}) {
        const auto bp = sd.breakpoints();
        REQUIRE(bp.size() >= 2);
        CHECK(bp.front() == sd.support().lo);
        CHECK(bp.back() == sd.support().hi);
        for (std::size_t i = 1; i < bp.size(); ++i) CHECK(bp[i] > bp[i - 1]);
    }
}

TEST_CASE("lorentzian matches the oracle closed form") {
    const LorentzianParams p{0.7, 0.3, -1.0};
    const auto sd = SpectralDensity::lorentzian(p);
    for (double w = -4.0; w <= 2.0; w += 0.37) {
        CHECK(sd(w) == doctest::Approx(oracle::lorentzian_J(p.g, p.gamma1, p.omega1, w)).epsilon(1e-15));
    }
}
