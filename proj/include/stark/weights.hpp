#pragma once

// Envelope and rate functions shared by every estimate: sigma, g_A, g_B,
// the envelope ch(z, x), the potential weight omega(q, z) and the rate
// functions Omega_r(z), omega_r(n).

#include "stark/potential.hpp"

namespace stark {

/// Weight exponent of the space; r > 1 strictly.
struct WeightParams {
    double r = 2.0;

    WeightParams() = default;
    explicit WeightParams(double r_);
};

/// 1 + |w|^{1/4}.
double sigma(double w);

/// exp(-(2/3) w^{3/2}) for w > 0, 1 for w <= 0.
double g_A(double w);
/// 1 / g_A(w).
double g_B(double w);
/// log g_A(w) = -(2/3) max(w, 0)^{3/2}.
double log_g_A(double w);

/// Exponents above this are handled in log space.
inline constexpr double kLogSpaceThreshold = 600.0;

/// g_B(-z) g_A(x - z) + g_A(-z) g_B(x - z). Switches to log space when an
/// exponent exceeds kLogSpaceThreshold; the result may still be +inf when
/// the true value is not representable.
double ch(double z, double x);
/// log ch(z, x), always finite.
double log_ch(double z, double x);
/// The direct product formula with no overflow guard (test cross-check).
double ch_direct(double z, double x);

/// Integral of |q(x)| / sqrt(1 + |x - z|) over [0, inf).
double omega(const Potential& q, double z);

/// (log(2+|z|)/(2+|z|))^{1/2} for r in (1,2), (2+|z|)^{-1/2} for r >= 2.
double Omega_r(double z, const WeightParams& params);

/// n^{-1/3} log^{1/2} n for r in (1,2) (needs n >= 2), n^{-1/3} for r >= 2.
double omega_r(long n, const WeightParams& params);

}  // namespace stark
