#include "stark/numerics/roots.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "stark/errors.hpp"

namespace stark::num {

RootResult brent(const std::function<double(double)>& f, double a, double b, double fa, double fb,
                 double xtol, int max_iter) {
    RootResult out;
    if (fa == 0.0) return {a, 0.0, 0};
    if (fb == 0.0) return {b, 0.0, 0};
    if ((fa > 0.0) == (fb > 0.0)) {
        throw BracketError("brent: no sign change on [" + std::to_string(a) + ", " +
                           std::to_string(b) + "]");
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();
    double c = a, fc = fa, d = b - a, e = d;
    for (int it = 0; it < max_iter; ++it) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol = 2.0 * eps * std::abs(b) + 0.5 * xtol;
        const double m = 0.5 * (c - b);
        if (std::abs(m) <= tol || fb == 0.0) {
            out.root = b;
            out.f_root = fb;
            return out;
        }
        if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
            double p, q, r;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += std::abs(d) > tol ? d : (m > 0.0 ? tol : -tol);
        fb = f(b);
        ++out.evaluations;
    }
    throw NumericError("brent: iteration budget exhausted");
}

RootResult brent(const std::function<double(double)>& f, double a, double b, double xtol,
                 int max_iter) {
    const double fa = f(a), fb = f(b);
    RootResult r = brent(f, a, b, fa, fb, xtol, max_iter);
    r.evaluations += 2;
    return r;
}

}  // namespace stark::num
