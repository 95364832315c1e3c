#pragma once

// Spectral solver for -f'' + (x + q) f = lambda f on [0, inf) with
// f'(0) - b f(0) = 0. psi(q, lambda, .) is integrated backward from an Airy
// boundary layer at X; eigenvalues are roots of w = psi'(0) - b psi(0);
// norming constants are kappa = log(psi(0)^2 / ||psi||^2).

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stark/potential.hpp"

namespace stark {

struct SolverConfig {
    /// X = max(lambda, 0) + X_margin, extended while tail_bound(X) >= tail_tol.
    double X_margin = 12.0;
    double rtol = 1e-10;
    double atol = 1e-12;
    /// Multiplies the localization width (3 pi n / 2)^{-2/3 + 1/12}.
    double bracket_halfwidth_scale = 8.0;
    /// Finite-difference step in lambda: fd_step_scale * max(1, |lambda|).
    double fd_step_scale = 1e-5;
    double tail_tol = 1e-12;
    int max_doublings = 10;
    /// Agreement target and hard failure threshold between the two kappa paths.
    double kappa_agree_tol = 1e-5;
    double kappa_fail_tol = 1e-4;

    /// Throws InputError on non-positive values or X_margin < 8.
    void validate() const;
};

struct PsiSolution {
    double lambda = 0.0;
    double X = 0.0;
    /// Accepted mesh, decreasing from X to 0.
    std::vector<double> x;
    std::vector<double> psi;
    std::vector<double> dpsi;
    double psi0 = 0.0;
    double dpsi0 = 0.0;
    /// ||psi||^2 including the closed-form Airy tail beyond X.
    double norm_sq = 0.0;
    double norm_sq_tail = 0.0;
    /// int_0^inf psi^2 v when a direction v was supplied.
    double weighted_sq = 0.0;
    /// Sign changes of psi on (0, X); psi has no zeros beyond X.
    int zero_count = 0;
    int rejected_steps = 0;
    /// Mesh indices where the integration state was renormalized.
    std::vector<std::size_t> segment_breaks;
};

/// Throws TailError when X cannot be pushed far enough within max_doublings
/// (or beyond the Airy range) and NumericError on integrator failure.
PsiSolution psi_backward(const Potential& q, double lambda, const SolverConfig& cfg = {},
                         const Potential* v = nullptr);

/// Truncation point for lambda under cfg.
double truncation_point(const Potential& q, double lambda, const SolverConfig& cfg);

/// w(q, b, lambda) = psi'(q, lambda, 0) - b psi(q, lambda, 0).
double wronskian_w(const Potential& q, double b, double lambda, const SolverConfig& cfg = {});

/// Lambda-derivatives of psi(0) and psi'(0) by Richardson-extrapolated central
/// differences replayed on the mesh of the solution at lambda.
struct PsiDot {
    double psi_dot0 = 0.0;
    double dpsi_dot0 = 0.0;
};
PsiDot psi_dot(const Potential& q, const PsiSolution& at, const SolverConfig& cfg = {});

struct SpectralPoint {
    long n = 0;
    double lambda = 0.0;
    double kappa = 0.0;
    double kappa_cross = 0.0;  // log(psi(0) / w_dot)
    bool has_kappa = false;
    double psi_at_0 = 0.0;
    double psi_prime_at_0 = 0.0;
    double norm_sq = 0.0;
    std::pair<double, double> bracket{0.0, 0.0};
    double w_residual = 0.0;
    double w_dot = 0.0;
    double seed = 0.0;
    bool used_fallback = false;
    double scan_floor = 0.0;
    int zero_count = 0;
};

/// n-th eigenvalue (n >= 1). The bracket is centred at the asymptotic
/// prediction; when it fails to isolate a root carrying n - 1 zeros the
/// solver falls back to Sturm zero-count localization. Throws BracketError
/// or AmbiguityError only when both routes fail.
SpectralPoint eigenvalue(const Potential& q, double b, long n, const SolverConfig& cfg = {});

/// Fills kappa from an eigenvalue; throws ConsistencyError when the two
/// paths differ by more than kappa_fail_tol.
SpectralPoint norming(const Potential& q, double b, const SpectralPoint& eig,
                      const SolverConfig& cfg = {});
SpectralPoint norming(const Potential& q, double b, long n, const SolverConfig& cfg = {});

/// Exact unperturbed eigenvalue: root of Ai'(-lambda) - b Ai(-lambda) in
/// (-a_{n-1}, -a_n), found with Airy evaluations only.
double unperturbed_eigenvalue(double b, long n);

struct GradientReport {
    long n = 0;
    double lambda = 0.0;
    double epsilon = 1e-4;
    double finite_difference = 0.0;   // [lambda(q + eps v) - lambda(q - eps v)] / (2 eps)
    double quadrature = 0.0;          // int eta^2 v
    double relative_difference = 0.0;
    bool passed = false;
};

/// Directional derivative of lambda_n along v, two ways. Never throws on
/// disagreement; the report carries both values.
GradientReport gradient_audit(const Potential& q, double b, long n, const Potential& v,
                              const SolverConfig& cfg = {}, double epsilon = 1e-4,
                              double tolerance = 1e-4);

}  // namespace stark
