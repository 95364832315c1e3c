#pragma once

// Dormand-Prince 5(4) embedded Runge-Kutta for small fixed-size systems.
// Integrates in either direction; records every accepted step so the mesh can
// be replayed with integrate_on_mesh (used for finite differences in a
// parameter, where a fixed mesh keeps the discrete solution smooth in it).

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "stark/errors.hpp"

namespace stark::num {

template <std::size_t N>
using OdeState = std::array<double, N>;

struct OdeOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double initial_step = 0.0;  // 0 picks one from the interval length
    double max_step = 0.0;      // 0 means unbounded
    int max_steps = 200000;
    /// Number of leading components entering the error norm; the rest
    /// (accumulated quadratures) ride along uncontrolled.
    std::size_t controlled = static_cast<std::size_t>(-1);
};

template <std::size_t N>
struct Trajectory {
    std::vector<double> x;
    std::vector<OdeState<N>> y;
    int rejected = 0;
};

namespace detail {

struct DormandPrince {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // b - b* (difference between the 5th and embedded 4th order weights)
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
};

// One step; k1 = f(x, y) on entry, k7 = f(x + h, y_new) on exit.
template <std::size_t N, class Rhs>
void dp_step(Rhs& rhs, double x, const OdeState<N>& y, double h, const OdeState<N>& k1,
             OdeState<N>& y_new, OdeState<N>& err, OdeState<N>& k7) {
    using T = DormandPrince;
    OdeState<N> tmp, k2, k3, k4, k5, k6;
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * T::a21 * k1[i];
    rhs(x + T::c2 * h, tmp, k2);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (T::a31 * k1[i] + T::a32 * k2[i]);
    rhs(x + T::c3 * h, tmp, k3);
    for (std::size_t i = 0; i < N; ++i)
        tmp[i] = y[i] + h * (T::a41 * k1[i] + T::a42 * k2[i] + T::a43 * k3[i]);
    rhs(x + T::c4 * h, tmp, k4);
    for (std::size_t i = 0; i < N; ++i)
        tmp[i] = y[i] + h * (T::a51 * k1[i] + T::a52 * k2[i] + T::a53 * k3[i] + T::a54 * k4[i]);
    rhs(x + T::c5 * h, tmp, k5);
    for (std::size_t i = 0; i < N; ++i)
        tmp[i] = y[i] + h * (T::a61 * k1[i] + T::a62 * k2[i] + T::a63 * k3[i] + T::a64 * k4[i] +
                             T::a65 * k5[i]);
    rhs(x + h, tmp, k6);
    for (std::size_t i = 0; i < N; ++i)
        y_new[i] = y[i] + h * (T::b1 * k1[i] + T::b3 * k3[i] + T::b4 * k4[i] + T::b5 * k5[i] +
                               T::b6 * k6[i]);
    rhs(x + h, y_new, k7);
    for (std::size_t i = 0; i < N; ++i)
        err[i] = h * (T::e1 * k1[i] + T::e3 * k3[i] + T::e4 * k4[i] + T::e5 * k5[i] +
                      T::e6 * k6[i] + T::e7 * k7[i]);
}

}  // namespace detail

/// Adaptive integration from x0 to x1 (either direction). Every point of
/// `stops` lying strictly between x0 and x1 is hit exactly and appears in the
/// trajectory. rhs(x, y, dydx).
template <std::size_t N, class Rhs>
Trajectory<N> integrate_adaptive(Rhs rhs, double x0, const OdeState<N>& y0, double x1,
                                 const OdeOptions& opt, std::span<const double> stops = {}) {
    Trajectory<N> out;
    out.x.push_back(x0);
    out.y.push_back(y0);
    if (x1 == x0) return out;
    const double dir = x1 > x0 ? 1.0 : -1.0;

    std::vector<double> targets;
    for (double s : stops)
        if ((s - x0) * dir > 0.0 && (x1 - s) * dir > 0.0) targets.push_back(s);
    std::sort(targets.begin(), targets.end(), [dir](double a, double b) { return a * dir < b * dir; });
    targets.push_back(x1);
    std::size_t next_target = 0;

    const std::size_t ctrl = std::min(opt.controlled, N);
    double h = opt.initial_step > 0.0 ? opt.initial_step : std::abs(x1 - x0) * 1e-3;
    if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
    h *= dir;

    double x = x0;
    OdeState<N> y = y0, k1, y_new, err, k7;
    rhs(x, y, k1);
    for (int step = 0; step < opt.max_steps; ++step) {
        const double target = targets[next_target];
        bool hit = false;
        double h_try = h;
        if ((x + h_try - target) * dir >= 0.0) {
            h_try = target - x;
            hit = true;
        }
        detail::dp_step<N>(rhs, x, y, h_try, k1, y_new, err, k7);
        double norm = 0.0;
        for (std::size_t i = 0; i < ctrl; ++i) {
            const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
            norm = std::max(norm, std::abs(err[i]) / sc);
        }
        if (!std::isfinite(norm)) norm = 1e10;
        const double factor =
            norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(norm, -0.2), 0.2, 5.0);
        if (norm <= 1.0) {
            x = hit ? target : x + h_try;
            y = y_new;
            k1 = k7;
            out.x.push_back(x);
            out.y.push_back(y);
            if (hit) {
                if (++next_target == targets.size()) return out;
            }
            // A forced short step says nothing about the natural step size.
            if (!hit || std::abs(h_try) >= std::abs(h)) h = h_try * factor;
        } else {
            ++out.rejected;
            h = h_try * std::max(factor, 0.1);
        }
        if (opt.max_step > 0.0 && std::abs(h) > opt.max_step) h = dir * opt.max_step;
        if (std::abs(h) < 1e-14 * std::max(1.0, std::abs(x))) {
            throw NumericError("ode: step size underflow at x = " + std::to_string(x));
        }
    }
    throw NumericError("ode: step budget exhausted at x = " + std::to_string(x));
}

/// Replays a mesh produced by integrate_adaptive with single fifth-order
/// steps and no error control.
template <std::size_t N, class Rhs>
Trajectory<N> integrate_on_mesh(Rhs rhs, std::span<const double> mesh, const OdeState<N>& y0) {
    Trajectory<N> out;
    if (mesh.empty()) return out;
    out.x.assign(mesh.begin(), mesh.end());
    out.y.reserve(mesh.size());
    out.y.push_back(y0);
    OdeState<N> y = y0, k1, y_new, err, k7;
    rhs(mesh[0], y, k1);
    for (std::size_t i = 1; i < mesh.size(); ++i) {
        detail::dp_step<N>(rhs, mesh[i - 1], y, mesh[i] - mesh[i - 1], k1, y_new, err, k7);
        y = y_new;
        k1 = k7;
        out.y.push_back(y);
    }
    return out;
}

}  // namespace stark::num
