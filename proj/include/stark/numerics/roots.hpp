#pragma once

#include <functional>

namespace stark::num {

struct RootResult {
    double root = 0.0;
    double f_root = 0.0;
    int evaluations = 0;
};

/// Brent's method on a bracket with f(a) f(b) <= 0. The endpoint values are
/// passed in so callers that already probed the bracket do not pay twice.
/// Throws BracketError when the signs agree.
RootResult brent(const std::function<double(double)>& f, double a, double b, double fa, double fb,
                 double xtol = 1e-14, int max_iter = 200);

RootResult brent(const std::function<double(double)>& f, double a, double b, double xtol = 1e-14,
                 int max_iter = 200);

}  // namespace stark::num
