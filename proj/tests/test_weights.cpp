#include <doctest.h>

#include <cmath>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "stark/errors.hpp"
#include "stark/weights.hpp"

using namespace stark;

TEST_CASE("sigma and the exponential weights") {
    CHECK(sigma(0.0) == 1.0);
    CHECK(sigma(16.0) == doctest::Approx(3.0));
    CHECK(sigma(-16.0) == doctest::Approx(3.0));
    CHECK(g_A(-3.0) == 1.0);
    CHECK(g_A(4.0) == doctest::Approx(std::exp(-16.0 / 3.0)));
    for (double w : {-5.0, 0.0, 0.1, 7.0, 30.0}) CHECK(g_A(w) * g_B(w) == doctest::Approx(1.0));
    CHECK(log_g_A(9.0) == doctest::Approx(-18.0));
}

TEST_CASE("ch: log form matches the direct product and stays finite") {
    for (double z : {-5.0, 0.0, 3.0, 20.0})
        for (double x : {0.0, 1.0, 10.0, 25.0}) CHECK(ch(z, x) == doctest::Approx(ch_direct(z, x)).epsilon(1e-13));
    CHECK(std::isfinite(log_ch(150.0, 300.0)));
    CHECK(log_ch(150.0, 300.0) == doctest::Approx(2.0 / 3.0 * std::pow(150.0, 1.5)).epsilon(1e-12));
    for (double z = -20.0; z < 60.0; z += 3.7) CHECK(ch(z, 0.0) == doctest::Approx(2.0));
}

TEST_CASE("omega against an independent quadrature") {
    const Potential q = Potential::exp_decay(1.0, 1.0);
    boost::math::quadrature::tanh_sinh<double> ts;
    boost::math::quadrature::exp_sinh<double> es;
    for (double z : {0.0, 2.0, 10.0, 50.0}) {
        auto f = [z](double x) { return std::exp(-x) / std::sqrt(1.0 + std::abs(x - z)); };
        double ref = es.integrate([&](double t) { return f(z + t); });
        if (z > 0) ref += ts.integrate(f, 0.0, z);
        CAPTURE(z);
        CHECK(omega(q, z) == doctest::Approx(ref).epsilon(1e-10));
    }
    CHECK(omega(Potential{}, 3.0) == 0.0);
}

TEST_CASE("omega is bounded by the L1 norm and decays in z") {
    const Potential q = Potential::gaussian(0.8, 2.0, 1.0);
    const double l1 = l1_norm(q);
    double prev = omega(q, 5.0);
    for (double z : {10.0, 40.0, 160.0}) {
        const double w = omega(q, z);
        CHECK(w <= l1);
        CHECK(w < prev);
        prev = w;
    }
}

TEST_CASE("rate functions") {
    const WeightParams two(2.0), one_half(1.5);
    CHECK(Omega_r(7.0, two) == doctest::Approx(1.0 / 3.0));
    CHECK(Omega_r(-7.0, two) == doctest::Approx(1.0 / 3.0));
    CHECK(Omega_r(7.0, one_half) == doctest::Approx(std::sqrt(std::log(9.0) / 9.0)));
    CHECK(omega_r(8, two) == doctest::Approx(0.5));
    CHECK(omega_r(8, one_half) == doctest::Approx(0.5 * std::sqrt(std::log(8.0))));
    CHECK_THROWS_AS(omega_r(0, two), InputError);
    CHECK_THROWS_AS(omega_r(1, one_half), InputError);
    CHECK_THROWS_AS(WeightParams(1.0), InputError);
    CHECK_THROWS_AS(WeightParams(std::nan("")), InputError);
}
