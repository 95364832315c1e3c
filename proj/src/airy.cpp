#include "stark/airy.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "stark/errors.hpp"

namespace stark {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrtPi = 1.7724538509055160273;

// Ai(0), Ai'(0), Bi(0), Bi'(0).
constexpr double kAi0 = 0.35502805388781723926;
constexpr double kAiP0 = -0.25881940379280679841;
constexpr double kBi0 = 0.61492662744600073515;
constexpr double kBiP0 = 0.44828835735382635791;

constexpr double kContinuationStep = 0.5;
constexpr double kAiryRecessiveSwitch = 1.5;
constexpr int kMaxAsymptoticTerms = 80;

struct AsymptoticCoefficients {
    std::array<double, kMaxAsymptoticTerms> u{};
    std::array<double, kMaxAsymptoticTerms> v{};

    AsymptoticCoefficients() {
        u[0] = 1.0;
        v[0] = 1.0;
        for (int k = 1; k < kMaxAsymptoticTerms; ++k) {
            const double kk = k;
            u[k] = u[k - 1] * (6 * kk - 5) * (6 * kk - 3) * (6 * kk - 1) / ((2 * kk - 1) * 216 * kk);
            v[k] = -(6 * kk + 1) / (6 * kk - 1) * u[k];
        }
    }
};

const AsymptoticCoefficients& coefficients() {
    static const AsymptoticCoefficients c;
    return c;
}

// Sum of sign^k c_k / zeta^k over k = first, first + stride, ... truncated at
// the smallest term of the asymptotic series.
double asymptotic_sum(const std::array<double, kMaxAsymptoticTerms>& c, double zeta, int first,
                      int stride, bool alternate) {
    double sum = 0.0;
    double previous = HUGE_VAL;
    double sign = 1.0;
    for (int k = first; k < kMaxAsymptoticTerms; k += stride) {
        const double term = sign * c[k] / std::pow(zeta, k);
        const double mag = std::abs(term);
        if (mag > previous) break;
        sum += term;
        if (mag <= 1e-18 * std::abs(sum)) break;
        previous = mag;
        if (alternate) sign = -sign;
    }
    return sum;
}

struct Pair {
    double y;
    double yp;
};

// Advance a solution of y'' = x y from x0 by h using the Taylor series about x0.
Pair taylor_step(double x0, Pair start, double h) {
    double a_km1 = 0.0;       // a_{k-1}
    double a_k = start.y;     // a_k, k = 0
    double a_kp1 = start.yp;  // a_{k+1}
    double y = a_k;
    double yp = 0.0;
    double hk = 1.0;  // h^k
    int small = 0;
    for (int k = 0; k < 200; ++k) {
        // a_{k+2} = (x0 a_k + a_{k-1}) / ((k+1)(k+2))
        const double a_kp2 = (x0 * a_k + a_km1) / ((k + 1.0) * (k + 2.0));
        const double term = a_kp1 * hk * h;           // a_{k+1} h^{k+1}
        const double dterm = (k + 1.0) * a_kp1 * hk;  // (k+1) a_{k+1} h^k
        y += term;
        yp += dterm;
        const double scale = std::abs(y) + std::abs(yp) + 1e-300;
        if (std::abs(term) + std::abs(dterm) <= 1e-18 * scale) {
            if (++small >= 3) break;
        } else {
            small = 0;
        }
        hk *= h;
        a_km1 = a_k;
        a_k = a_kp1;
        a_kp1 = a_kp2;
    }
    return {y, yp};
}

Pair continue_solution(double from, Pair start, double to) {
    const double span = to - from;
    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(span) / kContinuationStep)));
    const double h = span / steps;
    Pair p = start;
    for (int i = 0; i < steps; ++i) p = taylor_step(from + i * h, p, h);
    return p;
}

void check_finite(double x) {
    if (!std::isfinite(x)) throw InputError("airy: non-finite argument");
}

}  // namespace

namespace detail {

AirySample airy_maclaurin(double x) {
    // F = sum f_k x^{3k}, G = sum g_k x^{3k+1}; Ai = Ai(0) F + Ai'(0) G.
    const double x3 = x * x * x;
    double f_term = 1.0, g_term = x;
    double F = 1.0, G = x, Fp = 0.0, Gp = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double k3 = 3.0 * k;
        f_term *= x3 / ((k3 - 1.0) * k3);
        g_term *= x3 / (k3 * (k3 + 1.0));
        F += f_term;
        G += g_term;
        if (x != 0.0) {
            Fp += k3 * f_term / x;
            Gp += (k3 + 1.0) * g_term / x;
        }
        const double scale = std::abs(F) + std::abs(G) + std::abs(Fp) + std::abs(Gp);
        if (std::abs(f_term) + std::abs(g_term) <= 1e-19 * scale && k > 2) break;
    }
    AirySample s;
    s.x = x;
    s.ai = kAi0 * F + kAiP0 * G;
    s.ai_prime = kAi0 * Fp + kAiP0 * Gp;
    s.bi = kBi0 * F + kBiP0 * G;
    s.bi_prime = kBi0 * Fp + kBiP0 * Gp;
    s.regime = AiryRegime::Series;
    return s;
}

ScaledAirySample airy_asymptotic(double x) {
    const auto& c = coefficients();
    ScaledAirySample s;
    s.x = x;
    if (x > 0.0) {
        const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
        const double q = std::sqrt(std::sqrt(x));
        s.ai = asymptotic_sum(c.u, zeta, 0, 1, true) / (2.0 * kSqrtPi * q);
        s.ai_prime = -q * asymptotic_sum(c.v, zeta, 0, 1, true) / (2.0 * kSqrtPi);
        s.bi = asymptotic_sum(c.u, zeta, 0, 1, false) / (kSqrtPi * q);
        s.bi_prime = q * asymptotic_sum(c.v, zeta, 0, 1, false) / kSqrtPi;
        s.exponent = zeta;
        s.regime = AiryRegime::AsymptoticPos;
        return s;
    }
    const double t = -x;
    const double zeta = 2.0 / 3.0 * t * std::sqrt(t);
    const long double lt = t;
    const long double lzeta = 2.0L / 3.0L * lt * std::sqrt(lt);
    const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
    const long double theta = std::fmod(lzeta, two_pi) - std::numbers::pi_v<long double> / 4.0L;
    const double ct = static_cast<double>(std::cos(theta));
    const double st = static_cast<double>(std::sin(theta));
    const double q = std::sqrt(std::sqrt(t));
    const double pu = asymptotic_sum(c.u, zeta, 0, 2, true);
    const double qu = asymptotic_sum(c.u, zeta, 1, 2, true);
    const double pv = asymptotic_sum(c.v, zeta, 0, 2, true);
    const double qv = asymptotic_sum(c.v, zeta, 1, 2, true);
    s.ai = (ct * pu + st * qu) / (kSqrtPi * q);
    s.ai_prime = q * (st * pv - ct * qv) / kSqrtPi;
    s.bi = (-st * pu + ct * qu) / (kSqrtPi * q);
    s.bi_prime = q * (ct * pv + st * qv) / kSqrtPi;
    s.exponent = 0.0;
    s.regime = AiryRegime::AsymptoticNeg;
    return s;
}

AirySample airy_continued(double x) {
    AirySample s;
    s.x = x;
    s.regime = AiryRegime::Series;
    if (x <= 0.0) {
        const AirySample anchor = airy_maclaurin(-kAirySeriesLimit);
        const Pair ai = continue_solution(-kAirySeriesLimit, {anchor.ai, anchor.ai_prime}, x);
        const Pair bi = continue_solution(-kAirySeriesLimit, {anchor.bi, anchor.bi_prime}, x);
        s.ai = ai.y;
        s.ai_prime = ai.yp;
        s.bi = bi.y;
        s.bi_prime = bi.yp;
        return s;
    }
    // Bi is dominant going right, Ai is dominant going left.
    const AirySample bi_anchor = airy_maclaurin(kAirySeriesLimit);
    const Pair bi = continue_solution(kAirySeriesLimit, {bi_anchor.bi, bi_anchor.bi_prime}, x);
    const ScaledAirySample ai_anchor = airy_asymptotic(kAiryAsymptoticLimit);
    const double decay = std::exp(-ai_anchor.exponent);
    const Pair ai = continue_solution(kAiryAsymptoticLimit,
                                      {ai_anchor.ai * decay, ai_anchor.ai_prime * decay}, x);
    s.ai = ai.y;
    s.ai_prime = ai.yp;
    s.bi = bi.y;
    s.bi_prime = bi.yp;
    return s;
}

AirySample airy_unchecked(double x) {
    const double ax = std::abs(x);
    if (x > kAiryRecessiveSwitch && x < kAiryAsymptoticLimit) {
        // Ai loses relative accuracy in the Maclaurin sum once Bi dominates.
        AirySample s = airy_continued(x);
        if (x <= kAirySeriesLimit) {
            const AirySample m = airy_maclaurin(x);
            s.bi = m.bi;
            s.bi_prime = m.bi_prime;
        }
        return s;
    }
    if (ax <= kAirySeriesLimit) return airy_maclaurin(x);
    if (ax < kAiryAsymptoticLimit) return airy_continued(x);
    const ScaledAirySample a = airy_asymptotic(x);
    AirySample s;
    s.x = x;
    s.regime = a.regime;
    const double down = std::exp(-a.exponent);
    const double up = std::exp(a.exponent);
    s.ai = a.ai * down;
    s.ai_prime = a.ai_prime * down;
    s.bi = a.bi * up;
    s.bi_prime = a.bi_prime * up;
    return s;
}

}  // namespace detail

AirySample airy_eval(double x) {
    check_finite(x);
    if (x < kAiryMinX || x > kAiryMaxUnscaledX) {
        throw RangeError("airy_eval: x = " + std::to_string(x) +
                         " outside [-200, 100]; use airy_eval_scaled above 100");
    }
    return detail::airy_unchecked(x);
}

ScaledAirySample airy_eval_scaled(double x) {
    check_finite(x);
    if (x < kAiryMinX || x > kAiryMaxX) {
        throw RangeError("airy_eval_scaled: x = " + std::to_string(x) + " outside [-200, 200]");
    }
    if (std::abs(x) >= kAiryAsymptoticLimit) return detail::airy_asymptotic(x);
    const AirySample a = detail::airy_unchecked(x);
    ScaledAirySample s;
    s.x = x;
    s.regime = a.regime;
    s.exponent = x > 0.0 ? 2.0 / 3.0 * x * std::sqrt(x) : 0.0;
    const double up = std::exp(s.exponent);
    s.ai = a.ai * up;
    s.ai_prime = a.ai_prime * up;
    s.bi = a.bi / up;
    s.bi_prime = a.bi_prime / up;
    return s;
}

double airy_ai(double x) { return airy_eval(x).ai; }
double airy_ai_prime(double x) { return airy_eval(x).ai_prime; }

// ---------------------------------------------------------------------------
// Zeros

double mcmahon_guess(long n, AiryZeroKind kind) {
    if (n < 1) throw InputError("mcmahon_guess: n must be >= 1");
    const double shift = kind == AiryZeroKind::AiPrime ? 0.75 : 0.25;
    return -std::pow(1.5 * kPi * (static_cast<double>(n) - shift), 2.0 / 3.0);
}

AiryZeroRefinement refine_airy_zero(long n, AiryZeroKind kind) {
    if (n < 1 || n > 1000000) throw InputError("airy zero index must lie in [1, 1e6]");
    const bool prime = kind == AiryZeroKind::AiPrime;
    auto f = [prime](double x, double& df) {
        const AirySample s = detail::airy_unchecked(x);
        if (prime) {
            df = x * s.ai;  // Ai'' = x Ai
            return s.ai_prime;
        }
        df = s.ai_prime;
        return s.ai;
    };

    const double guess = mcmahon_guess(n, kind);
    // Consecutive zeros are about pi / sqrt|x| apart.
    const double half_gap = 0.5 * kPi / std::sqrt(std::max(1.0, std::abs(guess)));
    double lo = guess - half_gap, hi = guess + half_gap;
    double dlo = 0.0, dhi = 0.0;
    double flo = f(lo, dlo), fhi = f(hi, dhi);
    const bool bracketed = (flo < 0.0) != (fhi < 0.0);

    AiryZeroRefinement out;
    double x = guess;
    for (int it = 1; it <= 100; ++it) {
        double dfx = 0.0;
        const double fx = f(x, dfx);
        out.iterations = it;
        if (fx == 0.0) break;
        if (bracketed) {
            if ((fx < 0.0) == (flo < 0.0)) {
                lo = x;
                flo = fx;
            } else {
                hi = x;
                fhi = fx;
            }
        }
        double next = x - fx / dfx;
        // Quadratic convergence: once the Newton step is this small one more
        // step lands at rounding level.
        if (std::isfinite(next) && std::abs(next - x) <= 1e-9 * std::max(1.0, std::abs(x))) {
            x = next;
            double dfin = 0.0;
            const double ffin = f(x, dfin);
            if (dfin != 0.0 && std::isfinite(ffin / dfin)) x -= ffin / dfin;
            break;
        }
        if (!std::isfinite(next) || (bracketed && (next <= lo || next >= hi))) {
            next = 0.5 * (lo + hi);
            out.used_bisection = true;
        }
        x = next;
    }
    out.value = x;
    return out;
}

double airy_zero(long n) { return refine_airy_zero(n, AiryZeroKind::Ai).value; }
double airy_prime_zero(long n) { return refine_airy_zero(n, AiryZeroKind::AiPrime).value; }

AiryZeroTable AiryZeroTable::build(AiryZeroKind kind, long count) {
    if (count < 1) throw InputError("AiryZeroTable: count must be positive");
    AiryZeroTable t;
    t.kind = kind;
    t.values.reserve(static_cast<std::size_t>(count));
    for (long n = 1; n <= count; ++n) t.values.push_back(refine_airy_zero(n, kind).value);
    return t;
}

}  // namespace stark
