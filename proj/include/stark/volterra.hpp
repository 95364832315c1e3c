#pragma once

// Successive approximations for the solutions c(q,z,.) and s(q,z,.) of
//   -f'' + (x + q) f = z f
// through the Volterra equation f = f0 + int_0^x J0(z,x,y) f(y) q(y) dy with
// kernel J0(z,x,y) = theta0(z,x) psi0(z,y) - psi0(z,x) theta0(z,y).
// The kernel is separable, so each iterate costs two cumulative integrals.

#include <utility>
#include <vector>

#include "stark/potential.hpp"

namespace stark {

enum class PicardSeed { C, S };

struct PicardOptions {
    int k_max = 40;
    double term_tol = 1e-14;     // early exit on relative term sup-norm
    double converge_tol = 1e-10; // required on exit
    bool keep_terms = true;
};

struct PicardSeries {
    PicardSeed seed = PicardSeed::C;
    double z = 0.0;
    double x_max = 0.0;
    /// Grid: every panel contributes its left edge and its 16 Gauss nodes;
    /// the last entry is x_max.
    std::vector<double> x;
    std::vector<double> value;  // partial sum of f_k
    std::vector<double> deriv;  // partial sum of f_k'
    /// terms[k][i] = f_k(x[i]) (k = 0 is the unperturbed seed).
    std::vector<std::vector<double>> terms;
    std::vector<std::vector<double>> terms_prime;
    /// sup_i |f_k(x_i)| / max(1, |f(x_i)|).
    std::vector<double> term_norms;
    /// Plain sup_i |f_k(x_i)|.
    std::vector<double> term_sup;
    int k_max = 0;
    int terms_used = 0;
    std::vector<double> edges;

    /// (f, f') at any point of [0, x_max] by interpolation on the panel nodes.
    std::pair<double, double> eval(double x) const;
};

/// Panel edges on [0, x_max]: quarter local wavelength pi / (2 sqrt(max(1, |z - x|)))
/// capped at 0.5, refined at the potential's breakpoints.
std::vector<double> picard_panels(const Potential& q, double z, double x_max);

/// Throws ConvergenceError (message carries the term-norm trace) when the
/// series has not converged after k_max terms. x_max <= z + 40 and x_max > 0.
PicardSeries picard_c(const Potential& q, double z, double x_max, const PicardOptions& opt = {});
PicardSeries picard_s(const Potential& q, double z, double x_max, const PicardOptions& opt = {});

struct PhiSolution {
    std::vector<double> x;
    std::vector<double> phi;
    std::vector<double> phi_prime;
};

/// phi = c + b s; phi(0) = 1 and phi'(0) = b.
PhiSolution phi_solution(const Potential& q, double b, double z, double x_max,
                         const PicardOptions& opt = {});

}  // namespace stark
