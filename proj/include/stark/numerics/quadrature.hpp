#pragma once

#include <functional>
#include <span>
#include <vector>

namespace stark::num {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
    bool converged = false;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive Gauss-Kronrod (7/15) on [a, b].
QuadResult integrate_gk(const Integrand& f, double a, double b, double abs_tol, double rel_tol,
                        int max_intervals = 4000);

/// Same, on [a, b] split at the supplied interior breakpoints.
QuadResult integrate_gk(const Integrand& f, std::span<const double> breakpoints, double abs_tol,
                        double rel_tol, int max_intervals = 4000);

/// [a, inf) through x = a + t / (1 - t).
QuadResult integrate_gk_semi_infinite(const Integrand& f, double a, double abs_tol, double rel_tol,
                                      int max_intervals = 4000);

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
    std::vector<double> nodes;    // ascending
    std::vector<double> weights;

    explicit GaussLegendre(int n);
    int size() const { return static_cast<int>(nodes.size()); }

    /// integration[i][j] = integral over [-1, nodes[i]] of the j-th Lagrange
    /// basis polynomial on the nodes; exact for degree < n.
    std::vector<std::vector<double>> cumulative_matrix() const;

    /// Lagrange interpolation of values on the nodes at t in [-1, 1].
    double interpolate(std::span<const double> values, double t) const;
};

/// The shared 16-point rule.
const GaussLegendre& gauss_legendre16();

/// Composite Gauss-Legendre over consecutive panels [edges[i], edges[i+1]].
double integrate_panels(const Integrand& f, std::span<const double> edges,
                        const GaussLegendre& rule = gauss_legendre16());

}  // namespace stark::num
