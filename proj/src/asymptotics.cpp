#include "stark/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "stark/airy.hpp"
#include "stark/errors.hpp"
#include "stark/numerics/quadrature.hpp"

namespace stark {
namespace {

constexpr double kPi = std::numbers::pi;
// Ai(t)^2 < 1e-300 well before t = 60.
constexpr double kDecayedAt = 60.0;

// Oscillatory part [0, min(-a, end)] in quarter-wavelength panels.
std::vector<double> oscillatory_edges(double a, double stop, const std::vector<double>& breaks,
                                      double halving) {
    std::vector<double> edges = {0.0};
    double x = 0.0;
    std::vector<double> targets;
    for (double b : breaks)
        if (b > 0.0 && b < stop) targets.push_back(b);
    targets.push_back(stop);
    for (double t : targets) {
        while (x < t - 1e-14) {
            const double len = halving * kPi / (2.0 * std::sqrt(std::max(1.0, -a - x)));
            x = std::min(t, x + len);
            if (t - x < 1e-3 * len) x = t;
            edges.push_back(x);
        }
    }
    return edges;
}

double airy_weighted(const std::function<double(double)>& kernel, const Potential& q, double a,
                     double* error) {
    // kernel(t) with t = x + a; the integrand is kernel(x + a) * weight(x).
    std::vector<double> breaks = q.breakpoints();
    const double support = q.support_end();
    double upper = -a + kDecayedAt;
    if (std::isfinite(support)) upper = std::min(upper, support);
    if (upper <= 0.0) {
        if (error) *error = 0.0;
        return 0.0;
    }
    const double osc_end = std::clamp(-a, 0.0, upper);
    double coarse = 0.0, fine = 0.0;
    if (osc_end > 0.0) {
        const auto e1 = oscillatory_edges(a, osc_end, breaks, 1.0);
        const auto e2 = oscillatory_edges(a, osc_end, breaks, 0.5);
        coarse = num::integrate_panels(kernel, e1);
        fine = num::integrate_panels(kernel, e2);
    }
    double tail = 0.0, tail_err = 0.0;
    if (upper > osc_end) {
        std::vector<double> bp = {osc_end};
        for (double b : breaks)
            if (b > osc_end && b < upper) bp.push_back(b);
        bp.push_back(upper);
        const auto res = num::integrate_gk(kernel, bp, 1e-15, 1e-13);
        tail = res.value;
        tail_err = res.error;
    }
    if (error) *error = std::abs(fine - coarse) + tail_err;
    return fine + tail;
}

void check_quadrature(double value, double err, const char* what) {
    if (!(std::isfinite(value) && err <= 1e-9 * std::max(1.0, std::abs(value)))) {
        std::ostringstream os;
        os << what << ": quadrature error estimate " << err << " exceeds budget (value " << value << ")";
        throw NumericError(os.str());
    }
}

}  // namespace

double airy_square_integral(const Potential& q, double a, bool derivative, double* error) {
    if (q.is_zero()) {
        if (error) *error = 0.0;
        return 0.0;
    }
    auto f = [&](double x) {
        const double t = x + a;
        if (t > kDecayedAt) return 0.0;
        const double ai = airy_ai(t);
        const QValue v = q.eval(x);
        return ai * ai * (derivative ? v.dq : v.q);
    };
    return airy_weighted(f, q, a, error);
}

double airy_product_integral(const Potential& q, double a, double* error) {
    if (q.is_zero()) {
        if (error) *error = 0.0;
        return 0.0;
    }
    auto f = [&](double x) {
        const double t = x + a;
        if (t > kDecayedAt) return 0.0;
        const AirySample s = airy_eval(t);
        return s.ai * s.ai_prime * q.eval(x).q;
    };
    return airy_weighted(f, q, a, error);
}

AsymptoticPrediction eig_asym(const Potential& q, double b, long n) {
    if (n < 1) throw InputError("eig_asym: n must be positive");
    if (!std::isfinite(b)) throw InputError("eig_asym: b must be finite");
    const double ap = airy_prime_zero(n);
    const double root = std::sqrt(-ap);
    AsymptoticPrediction p;
    p.n = n;
    double e1 = 0.0, e2 = 0.0, e3 = 0.0;
    const double i_sq = airy_square_integral(q, ap, false, &e1);
    const double i_prod = airy_product_integral(q, ap, &e2);
    const double i_sq_dq = airy_square_integral(q, ap, true, &e3);
    check_quadrature(i_sq, e1, "eig_asym");
    check_quadrature(i_prod, e2, "kappa_asym");
    check_quadrature(i_sq_dq, e3, "kappa_asym (by parts)");
    p.quadrature_error_estimate = std::max({e1, e2, e3});

    const double q0 = q.is_zero() ? 0.0 : q.q0();
    AsymptoticTerms& t = p.terms;
    t.minus_an_prime = -ap;
    t.q_integral_term = kPi * i_sq / root;
    t.b_term = -b / ap;
    t.log_term = -std::log(-ap);
    t.kappa_q_integral_term = -2.0 * kPi * i_prod / root;
    t.q0_term = q0 / ap;
    t.b_sq_term = b * b / ap;
    p.lambda_pred = t.minus_an_prime + t.q_integral_term + t.b_term;
    p.kappa_pred = t.log_term + t.kappa_q_integral_term + t.q0_term + t.b_sq_term;
    // int Ai Ai'(x + a) q = -(1/2) [Ai(a)^2 q(0) + int Ai^2(x + a) q'].
    const double ai_a = airy_ai(ap);
    const double i_parts = -0.5 * (ai_a * ai_a * q0 + i_sq_dq);
    p.kappa_pred_by_parts = t.log_term - 2.0 * kPi * i_parts / root + t.q0_term + t.b_sq_term;
    return p;
}

AsymptoticPrediction kappa_asym(const Potential& q, double b, long n) { return eig_asym(q, b, n); }

std::pair<double, double> unperturbed_asym(double b, long n) {
    if (n < 1) throw InputError("unperturbed_asym: n must be positive");
    const double ap = airy_prime_zero(n);
    return {-ap - b / ap, -std::log(-ap) + b * b / ap};
}

AlphaBeta alpha_beta(double b, long n, double lambda) {
    if (n < 1) throw InputError("alpha_beta: n must be positive");
    const AirySample s = airy_eval(-lambda);
    const double rp = std::sqrt(kPi);
    AlphaBeta ab;
    ab.alpha = rp * s.ai;
    ab.alpha_prime = rp * s.ai_prime;
    ab.beta = rp * s.bi;
    ab.beta_prime = rp * s.bi_prime;
    ab.tau_dot = lambda * ab.alpha + b * ab.alpha_prime;
    ab.tau_cross = lambda * ab.beta + b * ab.beta_prime;
    const double sign = (n % 2 == 1) ? 1.0 : -1.0;  // (-1)^{n+1}
    const double base = 1.5 * kPi * static_cast<double>(n);
    ab.alpha_normalized = ab.alpha * sign * std::pow(base, 1.0 / 6.0);
    ab.beta_prime_normalized = ab.beta_prime * sign * std::pow(base, -1.0 / 6.0);
    return ab;
}

RateFit rate_fit(const std::vector<std::pair<long, double>>& residuals) {
    RateFit fit;
    std::vector<double> lx, ly;
    for (const auto& [n, r] : residuals) {
        if (n < 1) throw InputError("rate_fit: indices must be positive");
        if (r == 0.0 || !std::isfinite(r)) {
            fit.warnings.push_back("rate_fit: dropped n = " + std::to_string(n) +
                                   (r == 0.0 ? " (zero residual)" : " (non-finite residual)"));
            continue;
        }
        lx.push_back(std::log(static_cast<double>(n)));
        ly.push_back(std::log(std::abs(r)));
    }
    if (lx.size() < 8)
        throw InputError("rate_fit: need at least 8 usable points, got " + std::to_string(lx.size()));
    const double m = static_cast<double>(lx.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (sxx == 0.0) throw InputError("rate_fit: all indices equal");
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    fit.points_used = static_cast<int>(lx.size());
    return fit;
}

}  // namespace stark
