#include "stark/volterra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "stark/airy.hpp"
#include "stark/basis.hpp"
#include "stark/errors.hpp"
#include "stark/numerics/quadrature.hpp"

namespace stark {
namespace {

constexpr int kNodes = 16;
constexpr int kStride = kNodes + 1;

double panel_length(double z, double x) {
    const double len = std::numbers::pi / (2.0 * std::sqrt(std::max(1.0, std::abs(z - x))));
    return std::min(len, 0.5);
}

}  // namespace

std::vector<double> picard_panels(const Potential& q, double z, double x_max) {
    std::vector<double> stops;
    for (double b : q.breakpoints())
        if (b > 0.0 && b < x_max) stops.push_back(b);
    stops.push_back(x_max);
    std::vector<double> edges = {0.0};
    double x = 0.0;
    for (double stop : stops) {
        while (x < stop) {
            const double len = panel_length(z, x);
            const int count = std::max(1, static_cast<int>(std::ceil((stop - x) / len - 1e-12)));
            const double step = (stop - x) / count;
            // Only take one panel at a time so the length tracks the local frequency.
            x = count == 1 ? stop : x + step;
            edges.push_back(x);
        }
    }
    return edges;
}

std::pair<double, double> PicardSeries::eval(double xq) const {
    if (!(xq >= 0.0 && xq <= x_max)) throw InputError("PicardSeries::eval: x outside [0, x_max]");
    const auto it = std::upper_bound(edges.begin(), edges.end(), xq);
    std::size_t p = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - edges.begin() - 1, 0));
    if (p + 1 >= edges.size()) p = edges.size() - 2;
    const double a = edges[p], bnd = edges[p + 1];
    const double t = (2.0 * xq - a - bnd) / (bnd - a);
    const auto& rule = num::gauss_legendre16();
    const std::size_t base = p * kStride + 1;
    const std::span<const double> v(value.data() + base, kNodes);
    const std::span<const double> d(deriv.data() + base, kNodes);
    return {rule.interpolate(v, t), rule.interpolate(d, t)};
}

namespace {

PicardSeries picard(const Potential& q, double z, double x_max, PicardSeed seed,
                    const PicardOptions& opt) {
    if (!(std::isfinite(z) && std::isfinite(x_max) && x_max > 0.0))
        throw InputError("picard: need finite z and x_max > 0");
    if (x_max > z + 40.0 + 1e-12) throw InputError("picard: x_max must not exceed z + 40");
    if (opt.k_max < 1) throw InputError("picard: k_max must be positive");

    const auto& rule = num::gauss_legendre16();
    static const auto cumulative = rule.cumulative_matrix();

    PicardSeries out;
    out.seed = seed;
    out.z = z;
    out.x_max = x_max;
    out.k_max = opt.k_max;
    out.edges = picard_panels(q, z, x_max);
    const std::size_t panels = out.edges.size() - 1;
    const std::size_t n = panels * kStride + 1;
    out.x.resize(n);
    for (std::size_t p = 0; p < panels; ++p) {
        const double c = 0.5 * (out.edges[p] + out.edges[p + 1]);
        const double h = 0.5 * (out.edges[p + 1] - out.edges[p]);
        out.x[p * kStride] = out.edges[p];
        for (int k = 0; k < kNodes; ++k) out.x[p * kStride + 1 + k] = c + h * rule.nodes[k];
    }
    out.x[n - 1] = x_max;

    std::vector<double> psi(n), dpsi(n), theta(n), dtheta(n), qv(n);
    std::vector<double> f(n), df(n);
    for (std::size_t i = 0; i < n; ++i) {
        const BasisSample b = basis_eval(z, out.x[i]);
        psi[i] = b.psi0;
        dpsi[i] = b.psi0_prime;
        theta[i] = b.theta0;
        dtheta[i] = b.theta0_prime;
        f[i] = seed == PicardSeed::C ? b.c0 : b.s0;
        df[i] = seed == PicardSeed::C ? b.c0_prime : b.s0_prime;
        qv[i] = q.eval(out.x[i]).q;
    }
    out.value = f;
    out.deriv = df;
    if (opt.keep_terms) {
        out.terms.push_back(f);
        out.terms_prime.push_back(df);
    }
    auto sup_of = [&](const std::vector<double>& t, bool relative) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            s = std::max(s, std::abs(t[i]) / (relative ? std::max(1.0, std::abs(out.value[i])) : 1.0));
        return s;
    };
    out.term_norms.push_back(sup_of(f, true));
    out.term_sup.push_back(sup_of(f, false));
    out.terms_used = 1;
    if (q.is_zero()) return out;

    std::vector<double> next(n), dnext(n);
    bool converged = false;
    for (int k = 1; k <= opt.k_max; ++k) {
        double A = 0.0, B = 0.0;  // int_0^x psi0 f q, int_0^x theta0 f q
        next[0] = 0.0;
        dnext[0] = 0.0;
        for (std::size_t p = 0; p < panels; ++p) {
            const double h = 0.5 * (out.edges[p + 1] - out.edges[p]);
            const std::size_t base = p * kStride + 1;
            double ga[kNodes], gb[kNodes];
            for (int j = 0; j < kNodes; ++j) {
                const std::size_t i = base + j;
                ga[j] = psi[i] * f[i] * qv[i];
                gb[j] = theta[i] * f[i] * qv[i];
            }
            for (int i = 0; i < kNodes; ++i) {
                double sa = 0.0, sb = 0.0;
                for (int j = 0; j < kNodes; ++j) {
                    sa += cumulative[i][j] * ga[j];
                    sb += cumulative[i][j] * gb[j];
                }
                const std::size_t gi = base + i;
                const double Ai = A + h * sa, Bi = B + h * sb;
                next[gi] = theta[gi] * Ai - psi[gi] * Bi;
                dnext[gi] = dtheta[gi] * Ai - dpsi[gi] * Bi;
            }
            double ta = 0.0, tb = 0.0;
            for (int j = 0; j < kNodes; ++j) {
                ta += rule.weights[j] * ga[j];
                tb += rule.weights[j] * gb[j];
            }
            A += h * ta;
            B += h * tb;
            const std::size_t ge = (p + 1) * kStride;
            next[ge] = theta[ge] * A - psi[ge] * B;
            dnext[ge] = dtheta[ge] * A - dpsi[ge] * B;
        }
        double max_change = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            out.value[i] += next[i];
            out.deriv[i] += dnext[i];
        }
        for (std::size_t i = 0; i < n; ++i) {
            const double scale = 1.0 + std::abs(out.value[i]);
            max_change = std::max(max_change, std::abs(next[i]) / scale);
        }
        out.term_norms.push_back(sup_of(next, true));
        out.term_sup.push_back(sup_of(next, false));
        if (opt.keep_terms) {
            out.terms.push_back(next);
            out.terms_prime.push_back(dnext);
        }
        out.terms_used = k + 1;
        f.swap(next);
        df.swap(dnext);
        if (out.term_norms.back() < opt.term_tol ||
            (max_change <= opt.converge_tol && out.term_norms.back() < 1e-12)) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        std::ostringstream os;
        os << "picard: series for " << (seed == PicardSeed::C ? "c" : "s") << " at z = " << z
           << " not converged after " << opt.k_max << " terms; term norms:";
        for (double t : out.term_norms) os << ' ' << t;
        throw ConvergenceError(os.str());
    }
    return out;
}

}  // namespace

PicardSeries picard_c(const Potential& q, double z, double x_max, const PicardOptions& opt) {
    return picard(q, z, x_max, PicardSeed::C, opt);
}

PicardSeries picard_s(const Potential& q, double z, double x_max, const PicardOptions& opt) {
    return picard(q, z, x_max, PicardSeed::S, opt);
}

PhiSolution phi_solution(const Potential& q, double b, double z, double x_max,
                         const PicardOptions& opt) {
    if (!std::isfinite(b)) throw InputError("phi_solution: b must be finite");
    const PicardSeries c = picard_c(q, z, x_max, opt);
    const PicardSeries s = picard_s(q, z, x_max, opt);
    PhiSolution out;
    out.x = c.x;
    out.phi.resize(c.x.size());
    out.phi_prime.resize(c.x.size());
    for (std::size_t i = 0; i < c.x.size(); ++i) {
        out.phi[i] = c.value[i] + b * s.value[i];
        out.phi_prime[i] = c.deriv[i] + b * s.deriv[i];
    }
    out.phi[0] = 1.0;
    out.phi_prime[0] = b;
    return out;
}

}  // namespace stark
