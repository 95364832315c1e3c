#pragma once

// Closed-form predictions for eigenvalues and norming constants, the
// alpha/beta boundary quantities, and log-log rate fitting.

#include <string>
#include <utility>
#include <vector>

#include "stark/potential.hpp"

namespace stark {

struct AsymptoticTerms {
    double minus_an_prime = 0.0;          // -a_n'
    double q_integral_term = 0.0;         // pi int Ai^2(x + a_n') q / sqrt(-a_n')
    double b_term = 0.0;                  // -b / a_n'
    double log_term = 0.0;                // -log(-a_n')
    double kappa_q_integral_term = 0.0;   // -2 pi int Ai Ai'(x + a_n') q / sqrt(-a_n')
    double q0_term = 0.0;                 // q(0) / a_n'
    double b_sq_term = 0.0;               // b^2 / a_n'
};

struct AsymptoticPrediction {
    long n = 0;
    double lambda_pred = 0.0;
    double kappa_pred = 0.0;
    AsymptoticTerms terms;
    /// Kappa prediction with the q-integral taken by parts (q' route).
    double kappa_pred_by_parts = 0.0;
    double quadrature_error_estimate = 0.0;
};

/// int_0^inf Ai^2(x + a) f(x) dx for a <= 0 (or any a), f = q or q'.
/// Quarter-wavelength Gauss-Legendre panels on the oscillatory range, Gauss-
/// Kronrod beyond. `error` receives the panel-halving difference.
double airy_square_integral(const Potential& q, double a, bool derivative, double* error = nullptr);
/// int_0^inf Ai(x + a) Ai'(x + a) q(x) dx, direct quadrature.
double airy_product_integral(const Potential& q, double a, double* error = nullptr);

/// Eigenvalue prediction; kappa fields are filled as well.
AsymptoticPrediction eig_asym(const Potential& q, double b, long n);
/// Same computation; named for the kappa use.
AsymptoticPrediction kappa_asym(const Potential& q, double b, long n);

/// (-a_n' - b/a_n', -log(-a_n') + b^2/a_n').
std::pair<double, double> unperturbed_asym(double b, long n);

struct AlphaBeta {
    double alpha = 0.0, alpha_prime = 0.0;
    double beta = 0.0, beta_prime = 0.0;
    double tau_dot = 0.0, tau_cross = 0.0;
    /// alpha (-1)^{n+1} (3 pi n / 2)^{1/6}
    double alpha_normalized = 0.0;
    /// beta' (-1)^{n+1} (3 pi n / 2)^{-1/6}
    double beta_prime_normalized = 0.0;
};

AlphaBeta alpha_beta(double b, long n, double lambda);

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    int points_used = 0;
    std::vector<std::string> warnings;
};

/// Least squares of log|residual| against log n. Zero residuals are dropped
/// with a warning; fewer than 8 usable points is an input error.
RateFit rate_fit(const std::vector<std::pair<long, double>>& residuals);

}  // namespace stark
