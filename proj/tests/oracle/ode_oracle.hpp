#pragma once

// Reference solutions of -f'' + (x + q(x)) f = z f from boost::odeint
// (Runge-Kutta-Fehlberg 7(8)), independent of the library integrator.

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include <boost/math/special_functions/airy.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

namespace stark::oracle {

using QFun = std::function<double(double)>;

/// (f, f') at each point of `xs` (ascending from x0) for initial data at x0.
inline std::vector<std::pair<double, double>> solve_ivp(const QFun& q, double z, double x0, double f0, double df0,
                                                        const std::vector<double>& xs, double tol = 1e-13) {
    namespace ode = boost::numeric::odeint;
    using State = std::vector<double>;
    auto rhs = [&](const State& y, State& dy, double x) {
        dy[0] = y[1];
        dy[1] = (x + q(x) - z) * y[0];
    };
    auto stepper = ode::make_controlled(tol, tol, ode::runge_kutta_fehlberg78<State>());
    State y{f0, df0};
    double x = x0;
    std::vector<std::pair<double, double>> out;
    for (double target : xs) {
        if (target > x) {
            ode::integrate_adaptive(stepper, rhs, y, x, target, std::min(0.01, target - x));
            x = target;
        }
        out.emplace_back(y[0], y[1]);
    }
    return out;
}

/// psi(0), psi'(0) for the solution equal to sqrt(pi) Ai(x - lambda) beyond X,
/// integrated backward from X with boost::odeint and boost Airy data.
inline std::pair<double, double> psi_at_zero(const QFun& q, double lambda, double X, double tol = 1e-13) {
    namespace ode = boost::numeric::odeint;
    using State = std::vector<double>;
    const double s = std::sqrt(M_PI);
    // Work in t = X - x so the integration runs forward.
    auto rhs = [&](const State& y, State& dy, double t) {
        const double x = X - t;
        dy[0] = -y[1];
        dy[1] = -(x + q(x) - lambda) * y[0];
    };
    State y{s * boost::math::airy_ai(X - lambda), s * boost::math::airy_ai_prime(X - lambda)};
    auto stepper = ode::make_controlled(tol, tol, ode::runge_kutta_fehlberg78<State>());
    ode::integrate_adaptive(stepper, rhs, y, 0.0, X, 0.01);
    return {y[0], y[1]};
}

/// Root of psi'(0) - b psi(0) in [lo, hi] by TOMS 748.
inline double eigenvalue_in(const QFun& q, double b, double lo, double hi, double X) {
    auto w = [&](double lam) {
        const auto [p, dp] = psi_at_zero(q, lam, X);
        return dp - b * p;
    };
    boost::uintmax_t iters = 200;
    auto r = boost::math::tools::toms748_solve(w, lo, hi, boost::math::tools::eps_tolerance<double>(48), iters);
    return 0.5 * (r.first + r.second);
}

}  // namespace stark::oracle
