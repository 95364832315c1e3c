#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracle/airy_oracle.hpp"
#include "stark/airy.hpp"
#include "stark/errors.hpp"

using namespace stark;

TEST_CASE("values match the multiprecision oracle across regimes") {
    for (double x : {-150.0, -45.3, -12.0, -9.0, -8.99, -4.8, -1.0, 0.0, 0.7, 4.8, 5.5, 8.99, 9.0, 15.0, 30.0}) {
        CAPTURE(x);
        const auto ref = oracle::airy_reference(x);
        const auto s = airy_eval(x);
        const double scale_a = std::max(1.0, std::abs(ref.ai));
        CHECK(std::abs(s.ai - ref.ai) <= 1e-12 * scale_a + 1e-14 * std::abs(ref.ai) * std::abs(x));
        CHECK(std::abs(s.bi - ref.bi) <= 1e-11 * std::max(1.0, std::abs(ref.bi)));
        if (x > 0) CHECK(s.ai == doctest::Approx(ref.ai).epsilon(1e-11));
    }
}

TEST_CASE("known values at the origin") {
    const auto s = airy_eval(0.0);
    CHECK(s.ai == doctest::Approx(0.35502805388781723926).epsilon(1e-15));
    CHECK(s.ai_prime == doctest::Approx(-0.25881940379280679840).epsilon(1e-15));
    CHECK(s.bi == doctest::Approx(0.61492662744600073515).epsilon(1e-15));
    CHECK(s.bi_prime == doctest::Approx(0.44828835735382635791).epsilon(1e-15));
}

TEST_CASE("wronskian Ai Bi' - Ai' Bi = 1/pi") {
    for (double x = -100.0; x <= 30.0; x += 0.731) {
        const auto s = airy_eval(x);
        const double w = s.ai * s.bi_prime - s.ai_prime * s.bi;
        CHECK(std::abs(w - 1.0 / std::numbers::pi) <= 1e-10 * std::max(1.0, std::abs(s.ai * s.bi_prime)));
    }
}

TEST_CASE("Airy equation holds: d/dx Ai' = x Ai") {
    const double h = 1e-4;
    for (double x : {-20.0, -7.3, -2.0, 0.5, 3.0, 9.5}) {
        const double lhs = (airy_ai_prime(x + h) - airy_ai_prime(x - h)) / (2 * h);
        CHECK(lhs == doctest::Approx(x * airy_ai(x)).epsilon(1e-6).scale(1e-8));
    }
}

TEST_CASE("scaled values agree with unscaled ones where both exist") {
    for (double x : {0.5, 4.0, 9.0, 20.0, 60.0, 99.0}) {
        const auto s = airy_eval(x);
        const auto t = airy_eval_scaled(x);
        CHECK(t.ai * std::exp(-t.exponent) == doctest::Approx(s.ai).epsilon(1e-12));
        CHECK(t.bi * std::exp(t.exponent) == doctest::Approx(s.bi).epsilon(1e-12));
        CHECK(t.exponent == doctest::Approx(2.0 / 3.0 * std::pow(x, 1.5)).epsilon(1e-15));
    }
    CHECK(std::isfinite(airy_eval_scaled(200.0).ai));
}

TEST_CASE("range and input errors") {
    CHECK_THROWS_AS(airy_eval(-250.0), RangeError);
    CHECK_THROWS_AS(airy_eval(150.0), RangeError);
    CHECK_THROWS_AS(airy_eval_scaled(201.0), RangeError);
    CHECK_THROWS_AS(airy_eval(std::nan("")), InputError);
    CHECK_THROWS_AS(mcmahon_guess(0, AiryZeroKind::Ai), InputError);
    CHECK_THROWS_AS(airy_zero(0), InputError);
    CHECK_THROWS_AS(AiryZeroTable::build(AiryZeroKind::Ai, 0), InputError);
}

TEST_CASE("first zeros") {
    CHECK(airy_zero(1) == doctest::Approx(-2.338107410459767).epsilon(1e-15));
    CHECK(airy_prime_zero(1) == doctest::Approx(-1.018792971647471).epsilon(1e-15));
    CHECK(airy_zero(2) == doctest::Approx(-4.087949444130970).epsilon(1e-15));
    CHECK(airy_prime_zero(2) == doctest::Approx(-3.248197582179837).epsilon(1e-15));
    CHECK(airy_prime_zero(7) == doctest::Approx(oracle::airy_zero_reference(airy_prime_zero(7), true)).epsilon(1e-14));
}

TEST_CASE("zeros interlace and annihilate the function") {
    const auto a = AiryZeroTable::build(AiryZeroKind::Ai, 60);
    const auto ap = AiryZeroTable::build(AiryZeroKind::AiPrime, 60);
    for (long n = 1; n <= 60; ++n) {
        CHECK(ap(n) > a(n));
        if (n > 1) CHECK(a(n - 1) > ap(n));
        CHECK(std::abs(airy_ai(a(n))) < 1e-13);
        CHECK(std::abs(airy_ai_prime(ap(n))) < 1e-11);
    }
}

TEST_CASE("McMahon residual shrinks") {
    double prev = 1.0;
    for (long n : {2, 5, 20, 80, 300}) {
        const double r = std::abs(airy_prime_zero(n) - mcmahon_guess(n, AiryZeroKind::AiPrime));
        CHECK(r < prev);
        prev = r;
    }
    const auto far = refine_airy_zero(1000000, AiryZeroKind::AiPrime);
    CHECK(far.value < -1e4);
}
