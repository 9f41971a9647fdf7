#include "sqthermal/measures.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace sqt;

namespace {
// Reference values evaluated with 40-digit arithmetic from the definitions.
constexpr double kG0_5625 = 1.4729424832117066330;
constexpr double kGeof_06_02_01 = 1.0856128407010919455;
constexpr double kRg_06_02_01 = 0.55077153739214091264;
constexpr double kRawA_06_02_01 = 0.59202129289706818456;
constexpr double kRawB_06_02_01 = 0.44737556841418366878;
constexpr double kRawWeak = -1.9700232357778712217;  // (0.1, 0.5, 0.5)
}  // namespace

TEST_CASE("bosonic entropy values") {
    CHECK(bosonic_entropy(0.0) == 0.0);
    CHECK(bosonic_entropy(1.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(bosonic_entropy(0.5625) == doctest::Approx(kG0_5625).epsilon(1e-15));
    CHECK(bosonic_entropy(1.0, LogBase::e) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-15));
    for (double x : {1e-12, 1e-3, 0.3, 7.0, 1e4}) {
        CHECK(bosonic_entropy(x) == doctest::Approx(oracle::bosonic_entropy_bits(x)).epsilon(1e-13));
    }
    // Large x: the oracle form cancels, so use x ln(1 + 1/x) = 1 − 1/2x + 1/3x² + O(x⁻³).
    const double big = 1e9;
    const double series = 1 - 1 / (2 * big) + 1 / (3 * big * big);
    CHECK(bosonic_entropy(big) ==
          doctest::Approx(std::log2(1 + big) + series / std::log(2.0)).epsilon(1e-14));
    CHECK_THROWS_AS(bosonic_entropy(-1e-3), std::domain_error);
    CHECK_THROWS_AS(bosonic_entropy(NAN), std::domain_error);
    CHECK_THROWS_AS(bosonic_entropy(INFINITY), std::domain_error);
}

TEST_CASE("bosonic entropy is increasing and concave") {
    const double h = 1e-4;
    for (double x = 0.01; x < 50.0; x *= 1.3) {
        const double lo = bosonic_entropy(x - h);
        const double mid = bosonic_entropy(x);
        const double hi = bosonic_entropy(x + h);
        CHECK(hi > mid);
        CHECK(mid > lo);
        CHECK(hi - 2 * mid + lo < 0.0);
    }
}

TEST_CASE("state entropy") {
    CHECK(state_entropy(make_state(0.8, 0, 0)) == 0.0);
    CHECK(state_entropy(make_state(0.3, 0.5, 0.5)) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(state_entropy(make_state(0.9, 0.5, 0.5)) == state_entropy(make_state(0.3, 0.5, 0.5)));
}

TEST_CASE("geof closed form") {
    const auto sep = geof(make_state(0.3, 0.9, 0.9));
    CHECK(sep.value == 0.0);
    CHECK(sep.r_g == 0.0);
    CHECK_FALSE(sep.entangled);

    const auto pure = geof(make_state(0.6, 0, 0));
    CHECK(pure.entangled);
    CHECK(pure.r_g == doctest::Approx(std::atanh(0.6)).epsilon(1e-15));
    CHECK(pure.value == doctest::Approx(kG0_5625).epsilon(1e-14));

    const auto g = geof(make_state(0.6, 0.2, 0.1));
    CHECK(g.r_g == doctest::Approx(kRg_06_02_01).epsilon(1e-14));
    CHECK(g.value == doctest::Approx(kGeof_06_02_01).epsilon(1e-14));

    // Boundary λ = √(v_a v_b) is separable.
    CHECK(geof(make_state(0.25, 0.25, 0.25)).value == 0.0);
}

TEST_CASE("determinant condition reproduces r_g") {
    // Pure state: the determinant condition collapses to cosh(2r − u) = 1.
    const double r = std::atanh(0.6);
    CHECK(geof_rg_from_determinant_condition(covariance(make_state(0.6, 0, 0)))
          == doctest::Approx(r).epsilon(1e-11));

    // Thermal product of equal modes: roots u = ±ln γ, so the smaller root is
    // negative and the returned squeezing is 0 = r − r₀ clamped.
    const double v = 0.4;
    const auto thermal = covariance(make_state(0, v, v));
    CHECK(geof_rg_from_determinant_condition(thermal) == 0.0);
    const double gamma = thermal.n;
    const double root = oracle::bisect_root(
        [&](double u) { return 2 * gamma * std::cosh(u) - (gamma * gamma + 1); }, 0.0, 10.0);
    CHECK(root == doctest::Approx(2 * std::atanh(v)).epsilon(1e-12));

    const auto cov = covariance(make_state(0.6, 0.2, 0.1));
    const double sum = cov.n + cov.m;
    const double rhs = cov.block_determinant() + 1.0;
    const double u = oracle::bisect_root(
        [&](double x) { return sum * std::cosh(x) - 2 * cov.k * std::sinh(x) - rhs; }, 0.0,
        2 * std::atanh(0.6));
    CHECK(geof_rg_from_determinant_condition(cov) == doctest::Approx(0.5 * u).epsilon(1e-10));
    CHECK(std::abs(geof_rg_from_determinant_condition(cov) - kRg_06_02_01) < 1e-10);
}

TEST_CASE("determinant route agrees with closed form on a random grid") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 0.95);
    for (int i = 0; i < 2000; ++i) {
        const auto s = make_state(u(rng), u(rng), u(rng));
        const auto g = geof(s);
        const double rg = geof_rg_from_determinant_condition(covariance(s));
        const double sh = std::sinh(rg);
        CHECK(bosonic_entropy(sh * sh) == doctest::Approx(g.value).epsilon(1e-9).scale(1.0));
        CHECK((g.value > 0) == is_entangled(s));
    }
}

TEST_CASE("geof monotonicity") {
    const double h = 1e-3;
    for (double l = 0.05; l < 0.95; l += 0.1) {
        for (double va = 0.0; va < 0.9; va += 0.15) {
            for (double vb = 0.0; vb < 0.9; vb += 0.15) {
                const double base = geof(make_state(l, va, vb)).value;
                CHECK(geof(make_state(l + h, va, vb)).value >= base);
                CHECK(geof(make_state(l, va + h, vb)).value <= base);
                CHECK(geof(make_state(l, va, vb + h)).value <= base);
            }
        }
    }
}

TEST_CASE("coherent information") {
    const auto pure = coherent_information(make_state(0.6, 0, 0));
    CHECK(pure.i_a == doctest::Approx(kG0_5625).epsilon(1e-14));
    CHECK(pure.i_b == doctest::Approx(kG0_5625).epsilon(1e-14));

    const auto product = coherent_information(make_state(0, 0.3, 0.6));
    CHECK(product.i_a == 0.0);
    CHECK(product.i_b == 0.0);
    CHECK(product.raw_a == doctest::Approx(-bosonic_entropy(0.6 / 0.4)).epsilon(1e-13));
    CHECK(product.raw_b == doctest::Approx(-bosonic_entropy(0.3 / 0.7)).epsilon(1e-13));

    const auto weak = coherent_information(make_state(0.1, 0.5, 0.5));
    CHECK(weak.i_a == 0.0);
    CHECK(weak.i_b == 0.0);
    CHECK(weak.raw_a == doctest::Approx(kRawWeak).epsilon(1e-13));

    const auto mixed = coherent_information(make_state(0.6, 0.2, 0.1));
    CHECK(mixed.raw_a == doctest::Approx(kRawA_06_02_01).epsilon(1e-13));
    CHECK(mixed.raw_b == doctest::Approx(kRawB_06_02_01).epsilon(1e-13));
    CHECK(mixed.i_a == mixed.raw_a);

    // Exactly zero raw clips to +0.
    const auto vac = coherent_information(make_state(0, 0, 0));
    CHECK(vac.raw_a == 0.0);
    CHECK_FALSE(std::signbit(vac.raw_a));
    CHECK_FALSE(std::signbit(vac.i_a));
}

TEST_CASE("swap symmetry and the GEoF ≥ coherent information bound") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 0.99);
    for (int i = 0; i < 3000; ++i) {
        const auto s = make_state(u(rng), u(rng), u(rng));
        const auto t = s.swapped();
        CHECK(geof(s).value == doctest::Approx(geof(t).value).epsilon(1e-14));
        CHECK(state_entropy(s) == doctest::Approx(state_entropy(t)).epsilon(1e-14));
        const auto ci = coherent_information(s);
        const auto ct = coherent_information(t);
        CHECK(ci.i_a == doctest::Approx(ct.i_b).epsilon(1e-12));
        CHECK(ci.i_b == doctest::Approx(ct.i_a).epsilon(1e-12));
        CHECK(std::max(ci.i_a, ci.i_b) <= geof(s).value + 1e-9);
    }
}
