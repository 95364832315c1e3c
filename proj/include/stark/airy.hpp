#pragma once

// Airy functions Ai, Bi and their derivatives on the real line, plus the
// negative zeros a_n of Ai and a_n' of Ai'.

#include <vector>

namespace stark {

enum class AiryRegime { Series, AsymptoticPos, AsymptoticNeg };

/// Joint values of Ai, Ai', Bi, Bi' at a real point.
struct AirySample {
    double x = 0.0;
    double ai = 0.0;
    double ai_prime = 0.0;
    double bi = 0.0;
    double bi_prime = 0.0;
    AiryRegime regime = AiryRegime::Series;
};

/// Exponentially scaled values: the true Ai, Ai' equal ai * exp(-exponent)
/// and the true Bi, Bi' equal bi * exp(+exponent). exponent is
/// (2/3) x^{3/2} for x > 0 and zero otherwise.
struct ScaledAirySample {
    double x = 0.0;
    double ai = 0.0;
    double ai_prime = 0.0;
    double bi = 0.0;
    double bi_prime = 0.0;
    double exponent = 0.0;
    AiryRegime regime = AiryRegime::Series;
};

inline constexpr double kAiryMinX = -200.0;
/// Above this Bi overflows a double; use airy_eval_scaled.
inline constexpr double kAiryMaxUnscaledX = 100.0;
inline constexpr double kAiryMaxX = 200.0;

/// |x| <= 4.8 uses the Maclaurin series, 4.8 < |x| < 9 continues the
/// series by Taylor re-expansion of y'' = x y, |x| >= 9 uses the
/// asymptotic expansions (modulus/phase form on the negative axis).
inline constexpr double kAirySeriesLimit = 4.8;
inline constexpr double kAiryAsymptoticLimit = 9.0;

/// Throws InputError for non-finite x and RangeError outside
/// [kAiryMinX, kAiryMaxUnscaledX].
AirySample airy_eval(double x);

/// Valid on [kAiryMinX, kAiryMaxX].
ScaledAirySample airy_eval_scaled(double x);

/// Convenience accessors.
double airy_ai(double x);
double airy_ai_prime(double x);

enum class AiryZeroKind { Ai, AiPrime };

/// Leading term of the large-n zero expansion, used as a Newton seed:
/// -(3 pi / 2 (n - 3/4))^{2/3} for Ai', the (n - 1/4) shift for Ai.
double mcmahon_guess(long n, AiryZeroKind kind);

struct AiryZeroRefinement {
    double value = 0.0;
    int iterations = 0;
    bool used_bisection = false;
};

/// Newton refinement from mcmahon_guess with bisection fallback. 1 <= n <= 1e6.
AiryZeroRefinement refine_airy_zero(long n, AiryZeroKind kind);

double airy_zero(long n);        ///< a_n
double airy_prime_zero(long n);  ///< a_n'

/// First `count` zeros of one kind, strictly decreasing and negative.
struct AiryZeroTable {
    AiryZeroKind kind = AiryZeroKind::AiPrime;
    std::vector<double> values;

    static AiryZeroTable build(AiryZeroKind kind, long count);
    long count() const { return static_cast<long>(values.size()); }
    /// 1-based access.
    double operator()(long n) const { return values.at(static_cast<std::size_t>(n - 1)); }
};

namespace detail {

// Individual branches, exposed so the overlap bands can be tested.
AirySample airy_maclaurin(double x);
AirySample airy_continued(double x);
ScaledAirySample airy_asymptotic(double x);
// No range check; used by the zero finder far out on the negative axis.
AirySample airy_unchecked(double x);

}  // namespace detail

}  // namespace stark
