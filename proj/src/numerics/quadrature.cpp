#include "stark/numerics/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>

#include "stark/errors.hpp"

namespace stark::num {
namespace {

// Kronrod 15 abscissae (non-negative half) and weights, Gauss 7 weights.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Interval {
    double a, b, value, error;
    bool operator<(const Interval& o) const { return error < o.error; }
};

Interval gk15(const Integrand& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double kron = fc * kWgk[7];
    double gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const double f1 = f(c - dx), f2 = f(c + dx);
        kron += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
    }
    Interval iv{a, b, kron * h, std::abs((kron - gauss) * h)};
    if (!std::isfinite(iv.value)) iv.error = HUGE_VAL;
    return iv;
}

}  // namespace

QuadResult integrate_gk(const Integrand& f, std::span<const double> breakpoints, double abs_tol,
                        double rel_tol, int max_intervals) {
    if (breakpoints.size() < 2) throw InputError("integrate_gk: need at least two breakpoints");
    std::priority_queue<Interval> heap;
    QuadResult out;
    double total = 0.0, total_err = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (breakpoints[i + 1] <= breakpoints[i]) continue;
        Interval iv = gk15(f, breakpoints[i], breakpoints[i + 1]);
        out.evaluations += 15;
        total += iv.value;
        total_err += iv.error;
        heap.push(iv);
    }
    while (!heap.empty() && static_cast<int>(heap.size()) < max_intervals) {
        if (total_err <= std::max(abs_tol, rel_tol * std::abs(total))) {
            out.converged = true;
            break;
        }
        Interval worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {  // interval at rounding resolution
            heap.push(worst);
            break;
        }
        const Interval left = gk15(f, worst.a, mid);
        const Interval right = gk15(f, mid, worst.b);
        out.evaluations += 30;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to shed the drift of incremental updates.
    total = 0.0;
    total_err = 0.0;
    while (!heap.empty()) {
        total += heap.top().value;
        total_err += heap.top().error;
        heap.pop();
    }
    out.value = total;
    out.error = total_err;
    out.converged = out.converged || total_err <= std::max(abs_tol, rel_tol * std::abs(total));
    return out;
}

QuadResult integrate_gk(const Integrand& f, double a, double b, double abs_tol, double rel_tol,
                        int max_intervals) {
    const std::array<double, 2> bp = {a, b};
    return integrate_gk(f, bp, abs_tol, rel_tol, max_intervals);
}

QuadResult integrate_gk_semi_infinite(const Integrand& f, double a, double abs_tol, double rel_tol,
                                      int max_intervals) {
    auto mapped = [&f, a](double t) {
        if (t >= 1.0) return 0.0;
        const double s = 1.0 - t;
        const double v = f(a + t / s);
        return v == 0.0 ? 0.0 : v / (s * s);
    };
    return integrate_gk(mapped, 0.0, 1.0, abs_tol, rel_tol, max_intervals);
}

GaussLegendre::GaussLegendre(int n) {
    if (n < 1) throw InputError("GaussLegendre: n must be positive");
    nodes.resize(static_cast<std::size_t>(n));
    weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        weights[static_cast<std::size_t>(n - 1 - i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
}

namespace {

// P_0..P_{n} at t.
std::vector<double> legendre_values(int n, double t) {
    std::vector<double> p(static_cast<std::size_t>(n + 1));
    p[0] = 1.0;
    if (n >= 1) p[1] = t;
    for (int k = 2; k <= n; ++k) p[k] = ((2.0 * k - 1.0) * t * p[k - 1] - (k - 1.0) * p[k - 2]) / k;
    return p;
}

}  // namespace

std::vector<std::vector<double>> GaussLegendre::cumulative_matrix() const {
    // l_j(t) = w_j sum_k (2k+1)/2 P_k(t_j) P_k(t), exact since the rule integrates degree 2n-1.
    // int_{-1}^{t} P_0 = t + 1, int_{-1}^{t} P_k = (P_{k+1}(t) - P_{k-1}(t)) / (2k + 1).
    const int n = size();
    std::vector<std::vector<double>> m(static_cast<std::size_t>(n),
                                       std::vector<double>(static_cast<std::size_t>(n), 0.0));
    std::vector<std::vector<double>> pj(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) pj[j] = legendre_values(n, nodes[j]);
    for (int i = 0; i < n; ++i) {
        const std::vector<double> p = legendre_values(n, nodes[i]);
        std::vector<double> integral(static_cast<std::size_t>(n));
        integral[0] = nodes[i] + 1.0;
        for (int k = 1; k < n; ++k) integral[k] = (p[k + 1] - p[k - 1]) / (2.0 * k + 1.0);
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += (2.0 * k + 1.0) / 2.0 * pj[j][k] * integral[k];
            m[i][j] = weights[j] * s;
        }
    }
    return m;
}

double GaussLegendre::interpolate(std::span<const double> values, double t) const {
    // Barycentric form with weights for arbitrary nodes.
    const int n = size();
    double num = 0.0, den = 0.0;
    for (int j = 0; j < n; ++j) {
        const double d = t - nodes[j];
        if (d == 0.0) return values[j];
        double wj = 1.0;
        for (int k = 0; k < n; ++k)
            if (k != j) wj /= (nodes[j] - nodes[k]);
        num += wj / d * values[j];
        den += wj / d;
    }
    return num / den;
}

const GaussLegendre& gauss_legendre16() {
    static const GaussLegendre rule(16);
    return rule;
}

double integrate_panels(const Integrand& f, std::span<const double> edges,
                        const GaussLegendre& rule) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double c = 0.5 * (edges[i] + edges[i + 1]);
        const double h = 0.5 * (edges[i + 1] - edges[i]);
        double s = 0.0;
        for (int k = 0; k < rule.size(); ++k) s += rule.weights[k] * f(c + h * rule.nodes[k]);
        total += h * s;
    }
    return total;
}

}  // namespace stark::num
