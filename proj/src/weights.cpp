#include "stark/weights.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "stark/errors.hpp"
#include "stark/numerics/quadrature.hpp"

namespace stark {

WeightParams::WeightParams(double r_) : r(r_) {
    if (!(std::isfinite(r_) && r_ > 1.0)) throw InputError("WeightParams: r must satisfy r > 1");
}

double sigma(double w) { return 1.0 + std::pow(std::abs(w), 0.25); }

double log_g_A(double w) { return w > 0.0 ? -2.0 / 3.0 * w * std::sqrt(w) : 0.0; }

double g_A(double w) { return std::exp(log_g_A(w)); }

double g_B(double w) { return std::exp(-log_g_A(w)); }

double ch_direct(double z, double x) { return g_B(-z) * g_A(x - z) + g_A(-z) * g_B(x - z); }

double log_ch(double z, double x) {
    const double e1 = -log_g_A(-z) + log_g_A(x - z);
    const double e2 = log_g_A(-z) - log_g_A(x - z);
    const double hi = std::max(e1, e2), lo = std::min(e1, e2);
    return hi + std::log1p(std::exp(lo - hi));
}

double ch(double z, double x) {
    const double big = std::max({std::abs(log_g_A(-z)), std::abs(log_g_A(x - z))});
    if (big <= kLogSpaceThreshold) return ch_direct(z, x);
    return std::exp(log_ch(z, x));
}

double omega(const Potential& q, double z) {
    if (q.is_zero()) return 0.0;
    auto f = [&](double x) { return std::abs(q.eval(x).q) / std::sqrt(1.0 + std::abs(x - z)); };
    std::vector<double> bp = {0.0};
    if (z > 0.0) bp.push_back(z);
    for (double b : q.breakpoints())
        if (b > bp.back()) bp.push_back(b);
    const double end = q.support_end();
    num::QuadResult head{0.0, 0.0, 0, true}, tail{0.0, 0.0, 0, true};
    if (std::isfinite(end)) {
        if (end > bp.back()) bp.push_back(end);
        if (bp.size() > 1) head = num::integrate_gk(f, bp, 1e-14, 1e-11);
    } else {
        if (bp.size() > 1) head = num::integrate_gk(f, bp, 1e-14, 1e-11);
        tail = num::integrate_gk_semi_infinite(f, bp.back(), 1e-14, 1e-11);
    }
    const double value = head.value + tail.value;
    const double err = head.error + tail.error;
    if (!(head.converged && tail.converged) && err > 1e-8 * std::max(1.0, value)) {
        std::ostringstream os;
        os << "omega: quadrature did not converge at z = " << z << " (estimate " << value
           << ", error " << err << ")";
        throw NumericError(os.str());
    }
    return value;
}

double Omega_r(double z, const WeightParams& params) {
    const double t = 2.0 + std::abs(z);
    if (params.r < 2.0) return std::sqrt(std::log(t) / t);
    return 1.0 / std::sqrt(t);
}

double omega_r(long n, const WeightParams& params) {
    if (n < 1) throw InputError("omega_r: n must be positive");
    const double dn = static_cast<double>(n);
    if (params.r < 2.0) {
        if (n < 2) throw InputError("omega_r: n >= 2 required for r in (1, 2)");
        return std::cbrt(1.0 / dn) * std::sqrt(std::log(dn));
    }
    return std::cbrt(1.0 / dn);
}

}  // namespace stark
