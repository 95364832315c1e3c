#include "stark/basis.hpp"

#include <cmath>
#include <numbers>

#include "stark/airy.hpp"
#include "stark/weights.hpp"

namespace stark {

namespace {
const double kSqrtPi = std::sqrt(std::numbers::pi);
}

BasisSample basis_eval(double z, double x, std::optional<double> b) {
    const AirySample at_x = airy_eval(x - z);
    const AirySample at_0 = airy_eval(-z);
    BasisSample s;
    s.z = z;
    s.x = x;
    s.psi0 = kSqrtPi * at_x.ai;
    s.psi0_prime = kSqrtPi * at_x.ai_prime;
    s.theta0 = kSqrtPi * at_x.bi;
    s.theta0_prime = kSqrtPi * at_x.bi_prime;
    const double p0 = kSqrtPi * at_0.ai, dp0 = kSqrtPi * at_0.ai_prime;
    const double t0 = kSqrtPi * at_0.bi, dt0 = kSqrtPi * at_0.bi_prime;
    if (x == 0.0) {
        s.s0 = 0.0;
        s.s0_prime = 1.0;
        s.c0 = 1.0;
        s.c0_prime = 0.0;
    } else {
        s.s0 = -t0 * s.psi0 + p0 * s.theta0;
        s.s0_prime = -t0 * s.psi0_prime + p0 * s.theta0_prime;
        s.c0 = dt0 * s.psi0 - dp0 * s.theta0;
        s.c0_prime = dt0 * s.psi0_prime - dp0 * s.theta0_prime;
    }
    if (b) {
        s.b = b;
        s.phi0 = s.c0 + *b * s.s0;
        s.phi0_prime = s.c0_prime + *b * s.s0_prime;
    }
    return s;
}

BasisZDeriv basis_zderiv(const BasisSample& s) {
    const double z = s.z, xz = s.x - s.z;
    BasisZDeriv d;
    d.psi0_dot = -s.psi0_prime;
    d.theta0_dot = -s.theta0_prime;
    d.s0_dot = s.c0 - s.s0_prime;
    d.c0_dot = -z * s.s0 - s.c0_prime;
    d.s0_dot_prime = s.c0_prime - xz * s.s0;
    d.c0_dot_prime = -z * s.s0_prime - xz * s.c0;
    return d;
}

BasisZDeriv basis_zderiv(double z, double x) { return basis_zderiv(basis_eval(z, x)); }

const char* to_string(BasisBound bound) {
    switch (bound) {
        case BasisBound::Psi0: return "basis.psi0";
        case BasisBound::Psi0Prime: return "basis.psi0_prime";
        case BasisBound::Theta0: return "basis.theta0";
        case BasisBound::Theta0Prime: return "basis.theta0_prime";
        case BasisBound::S0: return "basis.s0";
        case BasisBound::S0Prime: return "basis.s0_prime";
        case BasisBound::C0: return "basis.c0";
        case BasisBound::C0Prime: return "basis.c0_prime";
    }
    return "basis.unknown";
}

double basis_bound_ratio(BasisBound bound, const BasisSample& s) {
    const double z = s.z, xz = s.x - s.z;
    const double lsz = std::log(sigma(z)), lsxz = std::log(sigma(xz));
    double value = 0.0, log_env = 0.0;
    switch (bound) {
        case BasisBound::Psi0:
            value = s.psi0;
            log_env = log_g_A(xz) - lsxz;
            break;
        case BasisBound::Psi0Prime:
            value = s.psi0_prime;
            log_env = log_g_A(xz) + lsxz;
            break;
        case BasisBound::Theta0:
            value = s.theta0;
            log_env = -log_g_A(xz) - lsxz;
            break;
        case BasisBound::Theta0Prime:
            value = s.theta0_prime;
            log_env = -log_g_A(xz) + lsxz;
            break;
        case BasisBound::S0:
            value = s.s0;
            log_env = log_ch(z, s.x) - lsz - lsxz;
            break;
        case BasisBound::S0Prime:
            value = s.s0_prime;
            log_env = log_ch(z, s.x) + lsxz - lsz;
            break;
        case BasisBound::C0:
            value = s.c0;
            log_env = log_ch(z, s.x) + lsz - lsxz;
            break;
        case BasisBound::C0Prime:
            value = s.c0_prime;
            log_env = log_ch(z, s.x) + lsz + lsxz;
            break;
    }
    if (value == 0.0) return 0.0;
    return std::exp(std::log(std::abs(value)) - log_env);
}

}  // namespace stark
