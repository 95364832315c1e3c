#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/airy.hpp>

#include "stark/airy.hpp"
#include "stark/asymptotics.hpp"
#include "stark/errors.hpp"

using namespace stark;

namespace {

double ai2_reference(const Potential& q, double a) {
    auto f = [&](double x) {
        const double v = boost::math::airy_ai(x + a);
        return v * v * q(x);
    };
    boost::math::quadrature::tanh_sinh<double> ts;
    boost::math::quadrature::exp_sinh<double> es;
    const double mid = -a + 2.0;
    double total = es.integrate([&](double t) { return f(mid + t); });
    // Split the oscillatory part so each piece is well resolved.
    const int pieces = static_cast<int>(std::ceil(mid * std::sqrt(std::max(1.0, -a))));
    for (int i = 0; i < pieces; ++i) total += ts.integrate(f, mid * i / pieces, mid * (i + 1) / pieces);
    return total;
}

}  // namespace

TEST_CASE("Airy-squared integral against an independent quadrature") {
    for (const Potential& q : {Potential::exp_decay(1.0, 2.0), Potential::compact_spline(1.0, 1.5, 1.5)})
        for (long n : {1, 6, 30}) {
            const double a = airy_prime_zero(n);
            CHECK(airy_square_integral(q, a, false) == doctest::Approx(ai2_reference(q, a)).epsilon(1e-9));
        }
}

TEST_CASE("integration by parts links the two kappa routes") {
    for (const Potential& q : {Potential::exp_decay(1.0, 2.0), Potential::gaussian(0.8, 2.0, 1.0)})
        for (long n : {3, 20}) {
            const double a = airy_prime_zero(n);
            const double ai = airy_ai(a);
            const double lhs = airy_product_integral(q, a);
            const double rhs = -0.5 * (ai * ai * q.q0() + airy_square_integral(q, a, true));
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
            const auto pred = kappa_asym(q, 0.4, n);
            CHECK(pred.kappa_pred == doctest::Approx(pred.kappa_pred_by_parts).epsilon(1e-10));
        }
}

TEST_CASE("predictions reduce to the unperturbed ones for q = 0") {
    for (double b : {-1.0, 0.0, 2.0})
        for (long n : {1, 9}) {
            const auto p = eig_asym(Potential{}, b, n);
            const auto [l, k] = unperturbed_asym(b, n);
            CHECK(p.lambda_pred == doctest::Approx(l));
            CHECK(p.kappa_pred == doctest::Approx(k));
        }
}

TEST_CASE("term decomposition") {
    const auto q = Potential::exp_decay(1.0, 2.0);
    const auto p = eig_asym(q, 1.5, 4);
    const double ap = airy_prime_zero(4);
    CHECK(p.terms.minus_an_prime == doctest::Approx(-ap));
    CHECK(p.terms.b_term == doctest::Approx(-1.5 / ap));
    CHECK(p.terms.q0_term == doctest::Approx(1.0 / ap));
    CHECK(p.terms.b_sq_term == doctest::Approx(2.25 / ap));
    CHECK(p.lambda_pred == doctest::Approx(p.terms.minus_an_prime + p.terms.q_integral_term + p.terms.b_term));
}

TEST_CASE("alpha and beta' normalizations approach one for q = 0") {
    for (long n : {10, 40}) {
        const double lam = -airy_prime_zero(n);
        const auto ab = alpha_beta(0.0, n, lam);
        CHECK(std::abs(ab.alpha_normalized - 1.0) < 0.05);
        CHECK(std::abs(ab.beta_prime_normalized - 1.0) < 0.05);
        CHECK(ab.alpha_prime == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
        CHECK(ab.tau_dot == doctest::Approx(lam * ab.alpha));
    }
}

TEST_CASE("rate fit recovers a power law") {
    std::vector<std::pair<long, double>> r;
    for (long n = 5; n <= 60; ++n) r.emplace_back(n, (n % 2 ? -3.0 : 3.0) * std::pow(n, -4.0 / 3.0));
    const auto fit = rate_fit(r);
    CHECK(fit.slope == doctest::Approx(-4.0 / 3.0).epsilon(1e-12));
    CHECK(fit.r_squared == doctest::Approx(1.0));
    r.emplace_back(61, 0.0);
    CHECK_FALSE(rate_fit(r).warnings.empty());
    CHECK_THROWS_AS(rate_fit({{1, 1.0}, {2, 0.5}}), InputError);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(eig_asym(Potential{}, 0.0, 0), InputError);
    CHECK_THROWS_AS(eig_asym(Potential{}, std::nan(""), 1), InputError);
    CHECK_THROWS_AS(unperturbed_asym(0.0, 0), InputError);
}
