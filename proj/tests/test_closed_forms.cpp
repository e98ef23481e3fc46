#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "specgeo/closed_forms.hpp"
#include "specgeo/spectrum.hpp"
#include "test_util.hpp"

using namespace specgeo;
using doctest::Approx;

constexpr double kPi = std::numbers::pi;

TEST_CASE("unit ball volumes") {
    CHECK(unit_ball_volume(1) == 2.0);
    CHECK(unit_ball_volume(2) == kPi);
    CHECK(unit_ball_volume(3) == Approx(4.188790204786391).epsilon(1e-14));
    CHECK(unit_ball_volume(4) == Approx(4.9348022005446793).epsilon(1e-14));
    CHECK(unit_ball_volume(5) == Approx(5.2637890139143246).epsilon(1e-14));
    CHECK(unit_ball_volume(6) == Approx(5.16771278004997).epsilon(1e-14));
    // two-step recurrence omega_m = omega_{m-2} * 2 pi / m
    for (int m = 3; m <= 40; ++m)
        CHECK(unit_ball_volume(m) ==
              Approx(unit_ball_volume(m - 2) * 2.0 * kPi / m).epsilon(1e-13));
    CHECK_THROWS_AS(unit_ball_volume(0), std::domain_error);
}

TEST_CASE("weyl constants") {
    CHECK(weyl_constant(1) == Approx(9.8696044010893586).epsilon(1e-14));
    CHECK(weyl_constant(2) == 4.0 * kPi); // omega_2^(2/2) = pi exactly
    CHECK(weyl_constant(3) == Approx(15.19266624115199).epsilon(1e-12));
    CHECK(weyl_constant(4) == Approx(17.771531752633465).epsilon(1e-14));
    CHECK(weyl_constant(5) == Approx(20.316100259080068).epsilon(1e-14));
}

TEST_CASE("sphere volumes") {
    CHECK(sphere_volume(2) == 4.0 * kPi);
    CHECK(sphere_volume(2) == weyl_constant(2)); // the n = 2 coincidence the dips rely on
    CHECK(sphere_volume(3) == 2.0 * kPi * kPi);
    CHECK(sphere_volume(4) == Approx(26.318945069571623).epsilon(1e-14));
    CHECK(sphere_volume(5) == Approx(31.00627668029982).epsilon(1e-14));
    // Vol(S^n) = (n+1) * omega_{n+1}
    for (int n = 2; n <= 30; ++n)
        CHECK(sphere_volume(n) == Approx((n + 1) * unit_ball_volume(n + 1)).epsilon(1e-13));
}

TEST_CASE("gamma constants") {
    CHECK(gamma_constant(2) == Approx(2363205196429.9513).epsilon(1e-12));
    CHECK(gamma_constant(3) == Approx(665953480569997.81).epsilon(1e-12));
    CHECK(gamma_constant(4) == Approx(3.2143223655934558e17).epsilon(1e-12));
    CHECK(gamma_constant(5) == Approx(1.9607377443167229e20).epsilon(1e-12));
    CHECK(gamma_constant_log2(2) == Approx(41.103882042195898).epsilon(1e-13));
    CHECK(gamma_constant_log2(4) == Approx(58.157292237779861).epsilon(1e-13));
    CHECK(gamma_constant_log2(5) == Approx(67.409958480561477).epsilon(1e-13));
    // 2^(10n+18) crosses the double range near n = 102; the log never does
    CHECK(std::isfinite(gamma_constant(100)));
    CHECK(std::isinf(gamma_constant(150)));
    CHECK(std::isfinite(gamma_constant_log2(150)));
    CHECK(std::exp2(gamma_constant_log2(3) - gamma_constant_log2(2)) ==
          Approx(gamma_constant(3) / gamma_constant(2)).epsilon(1e-12));
}

TEST_CASE("dim_constants bundles the individual closed forms") {
    for (int n = 1; n <= 8; ++n) {
        DimConstants c = dim_constants(n);
        CHECK(c.omega_n == unit_ball_volume(n));
        CHECK(c.weyl_W == weyl_constant(n));
        CHECK(c.gamma_log2 == gamma_constant_log2(n));
        CHECK(c.sphere_vol == sphere_volume(n));
    }
}

TEST_CASE("sphere levels: n = 2 closed forms") {
    auto levels = sphere_levels(2, 50);
    REQUIRE(levels.size() == 51);
    for (std::int64_t l = 0; l <= 50; ++l) {
        CHECK(levels[l].l == l);
        CHECK(levels[l].value == double(l * (l + 1)));
        CHECK(levels[l].mult == std::uint64_t(2 * l + 1));
        CHECK(levels[l].cumulative == std::uint64_t((l + 1) * (l + 1)));
    }
}

TEST_CASE("sphere levels: known multiplicities in higher dimensions") {
    auto l3 = sphere_levels(3, 4);
    for (std::int64_t l = 0; l <= 4; ++l) {
        CHECK(l3[l].mult == std::uint64_t((l + 1) * (l + 1)));
        CHECK(l3[l].value == double(l * (l + 2)));
    }
    auto l4 = sphere_levels(4, 4);
    std::uint64_t m4[] = {1, 5, 14, 30, 55};
    for (int l = 0; l <= 4; ++l) CHECK(l4[l].mult == m4[l]);
    auto l5 = sphere_levels(5, 4);
    std::uint64_t m5[] = {1, 6, 20, 50, 105};
    for (int l = 0; l <= 4; ++l) CHECK(l5[l].mult == m5[l]);
}

TEST_CASE("sphere levels: cumulative counts telescope") {
    for (int n = 2; n <= 7; ++n) {
        auto levels = sphere_levels(n, 40);
        CHECK(levels[0].cumulative == 1);
        for (std::size_t i = 1; i < levels.size(); ++i) {
            CHECK(levels[i].mult > 0);
            CHECK(levels[i].value > levels[i - 1].value);
            CHECK(levels[i].cumulative == levels[i - 1].cumulative + levels[i].mult);
        }
    }
}

TEST_CASE("sphere spectrum: first nine values of the round 2-sphere") {
    Spectrum s = sphere_spectrum(2, 9);
    REQUIRE(s.size() == 9);
    double expect[] = {0, 2, 2, 2, 6, 6, 6, 6, 6};
    for (int i = 0; i < 9; ++i) CHECK(s.values[i] == expect[i]);
    CHECK(s.dim == 2);
    CHECK(s.volume == sphere_volume(2));
}

TEST_CASE("sphere spectrum: shape properties at random sizes") {
    test_rng rng(20260814);
    for (int trial = 0; trial < 30; ++trial) {
        int n = int(rng.integer(2, 7));
        std::int64_t count = rng.integer(1, 5000);
        Spectrum s = sphere_spectrum(n, count);
        REQUIRE(s.size() == count);
        CHECK(s.dim == n);
        CHECK(s.volume == sphere_volume(n));
        CHECK(s.values[0] == 0.0);
        if (count > 1) CHECK(s.values[1] == double(n)); // level 1: 1 * (1 + n - 1)
        for (std::int64_t i = 1; i < count; ++i) CHECK(s.values[i] >= s.values[i - 1]);
    }
}

TEST_CASE("weyl ratio: exact rationals at the block boundaries of the 2-sphere") {
    Spectrum s = sphere_spectrum(2, 1002 * 1002);
    CHECK(weyl_ratio(s, 1) == 0.0);
    CHECK(weyl_ratio(s, 2) == 1.0);
    CHECK(weyl_ratio(s, 4) == 0.5); // the unique global dip value
    for (std::int64_t l = 1; l <= 1000; ++l) {
        double lam = double(l) * double(l + 1);
        CHECK(weyl_ratio(s, (l + 1) * (l + 1)) == double(l) / double(l + 1));
        CHECK(weyl_ratio(s, l * l + 1) == lam / double(l * l + 1));
    }
}

TEST_CASE("weyl ratio: each block attains its minimum at the block end") {
    test_rng rng(99123);
    for (int n = 2; n <= 5; ++n) {
        auto levels = sphere_levels(n, 25);
        Spectrum s = sphere_spectrum(n, std::int64_t(levels.back().cumulative));
        for (int trial = 0; trial < 200; ++trial) {
            auto l = std::size_t(rng.integer(1, 24));
            std::int64_t lo = std::int64_t(levels[l - 1].cumulative) + 1;
            std::int64_t hi = std::int64_t(levels[l].cumulative);
            std::int64_t k = rng.integer(lo, hi);
            CHECK(weyl_ratio(s, hi) <= weyl_ratio(s, k));
        }
    }
}

TEST_CASE("segment spectrum: closed form and exact special cases") {
    Spectrum s = segment_dirichlet_spectrum(0.5, 5);
    double step = kPi / (2.0 * 0.5);
    for (int j = 0; j < 5; ++j) {
        double t = (j + 1) * step;
        CHECK(s.values[j] == t * t);
    }
    CHECK(s.values[0] == Approx(9.8696044010893586).epsilon(1e-15));
    CHECK(s.dim == 1);
    CHECK(s.volume == 1.0); // 2h

    Spectrum u = segment_dirichlet_spectrum(kPi / 2.0, 3);
    CHECK(u.values[0] == 1.0);
    CHECK(u.values[1] == 4.0);
    CHECK(u.values[2] == 9.0);

    // eigenvalues scale like 1/h^2
    test_rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        double h = rng.uniform(0.05, 5.0);
        double c = rng.uniform(0.5, 3.0);
        Spectrum a = segment_dirichlet_spectrum(h, 10);
        Spectrum b = segment_dirichlet_spectrum(c * h, 10);
        for (int j = 0; j < 10; ++j)
            CHECK(b.values[j] == Approx(a.values[j] / (c * c)).epsilon(1e-12));
    }
}

TEST_CASE("closed-form preconditions") {
    CHECK_THROWS_AS(sphere_spectrum(0, 5), std::domain_error);
    CHECK_THROWS_AS(sphere_spectrum(2, 0), std::domain_error);
    CHECK_THROWS_AS(sphere_levels(2, -1), std::domain_error);
    CHECK_THROWS_AS(segment_dirichlet_spectrum(0.0, 3), std::domain_error);
    CHECK_THROWS_AS(segment_dirichlet_spectrum(1.0, 0), std::domain_error);
    Spectrum s = sphere_spectrum(2, 4);
    CHECK_THROWS_AS(weyl_ratio(s, 0), std::domain_error);
    CHECK_THROWS_AS(weyl_ratio(s, 5), std::domain_error);
    Spectrum none;
    none.values = {0.0, 1.0};
    CHECK_THROWS_AS(weyl_ratio(none, 1), std::domain_error);
}
