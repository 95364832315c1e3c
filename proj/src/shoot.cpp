#include "stark/shoot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "stark/airy.hpp"
#include "stark/asymptotics.hpp"
#include "stark/errors.hpp"
#include "stark/numerics/ode.hpp"
#include "stark/numerics/roots.hpp"

namespace stark {

void SolverConfig::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(std::isfinite(v) && v > 0.0))
            throw InputError(std::string("SolverConfig: ") + name + " must be positive");
    };
    positive(X_margin, "X_margin");
    positive(rtol, "rtol");
    positive(atol, "atol");
    positive(bracket_halfwidth_scale, "bracket_halfwidth_scale");
    positive(fd_step_scale, "fd_step_scale");
    positive(tail_tol, "tail_tol");
    positive(kappa_agree_tol, "kappa_agree_tol");
    positive(kappa_fail_tol, "kappa_fail_tol");
    if (X_margin < 8.0) throw InputError("SolverConfig: X_margin must be at least 8");
    if (max_doublings < 0) throw InputError("SolverConfig: max_doublings must be non-negative");
}

namespace {

using State = num::OdeState<4>;
const double kLogSqrtPi = 0.5 * std::log(std::numbers::pi);

// y = (psi, psi', int_x^X psi^2, int_x^X psi^2 v), integrated from X down to 0.
struct PsiRhs {
    const Potential* q;
    const Potential* v;
    double lambda;
    void operator()(double x, const State& y, State& dy) const {
        const double qx = q->is_zero() ? 0.0 : q->eval(x).q;
        dy[0] = y[1];
        dy[1] = (x + qx - lambda) * y[0];
        dy[2] = -y[0] * y[0];
        dy[3] = v ? -y[0] * y[0] * v->eval(x).q : 0.0;
    }
};

struct Terminal {
    State y0{};
    double log_scale = 0.0;  // true psi = exp(log_scale) * integrated psi
    double tail_scaled = 0.0;
};

Terminal terminal(double X, double lambda) {
    const ScaledAirySample s = airy_eval_scaled(X - lambda);
    Terminal t;
    t.y0 = {s.ai, s.ai_prime, 0.0, 0.0};
    t.log_scale = kLogSqrtPi - s.exponent;
    t.tail_scaled = s.ai_prime * s.ai_prime - (X - lambda) * s.ai * s.ai;
    return t;
}

std::vector<double> stops_for(const Potential& q, const Potential* v) {
    std::vector<double> s = q.breakpoints();
    if (v) {
        const auto extra = v->breakpoints();
        s.insert(s.end(), extra.begin(), extra.end());
    }
    return s;
}

num::OdeOptions ode_options(const SolverConfig& cfg) {
    num::OdeOptions opt;
    opt.rtol = cfg.rtol;
    opt.atol = cfg.atol;
    opt.max_step = 0.5;
    opt.controlled = 2;
    return opt;
}

// Exponent of the Airy growth met when integrating from x down to lambda.
double growth(double x, double lambda) {
    const double t = std::max(x - lambda, 0.0);
    return 2.0 / 3.0 * t * std::sqrt(t);
}

// Renormalization points between X and 0 such that psi grows by at most
// exp(kMaxGrowth) on each piece; keeps the state finite for distant X.
constexpr double kMaxGrowth = 200.0;

std::vector<double> segment_points(double X, double lambda) {
    std::vector<double> pts = {X};
    double cur = X;
    while (growth(cur, lambda) > kMaxGrowth) {
        const double next = lambda + std::pow(1.5 * (growth(cur, lambda) - kMaxGrowth), 2.0 / 3.0);
        if (next <= 0.0) break;
        pts.push_back(next);
        cur = next;
    }
    pts.push_back(0.0);
    return pts;
}

// Divides the state by its size; returns the log of the factor removed.
double renormalize(State& y) {
    const double m = std::max(std::abs(y[0]), std::abs(y[1]));
    if (!(m > 0.0) || !std::isfinite(m)) return 0.0;
    y[0] /= m;
    y[1] /= m;
    y[2] /= m * m;
    y[3] /= m * m;
    return std::log(m);
}

// (psi(0), psi'(0)) replayed on a frozen mesh, in true scale.
std::pair<double, double> replay(const Potential& q, double lambda, double X,
                                 const std::vector<double>& mesh,
                                 const std::vector<std::size_t>& breaks) {
    const Terminal t = terminal(X, lambda);
    State y = t.y0;
    double log_scale = t.log_scale;
    std::size_t start = 0;
    for (std::size_t k = 0; k <= breaks.size(); ++k) {
        const std::size_t stop = k < breaks.size() ? breaks[k] : mesh.size() - 1;
        const std::span<const double> piece(mesh.data() + start, stop - start + 1);
        const auto traj = num::integrate_on_mesh<4>(PsiRhs{&q, nullptr, lambda}, piece, y);
        y = traj.y.back();
        if (k < breaks.size()) log_scale += renormalize(y);
        start = stop;
    }
    const double s = std::exp(log_scale);
    return {s * y[0], s * y[1]};
}

// w up to a positive factor; only the sign and the root matter.
double replay_w_scaled(const Potential& q, double b, double lambda, double X,
                       const std::vector<double>& mesh, const std::vector<std::size_t>& breaks) {
    const auto r = replay(q, lambda, X, mesh, breaks);
    return r.second - b * r.first;
}

}  // namespace

double truncation_point(const Potential& q, double lambda, const SolverConfig& cfg) {
    double margin = cfg.X_margin;
    for (int k = 0; k <= cfg.max_doublings; ++k, margin *= 2.0) {
        const double X = std::max(lambda, 0.0) + margin;
        if (X - lambda > kAiryMaxX) break;
        const double tb = q.is_zero() ? 0.0 : q.tail_bound(X);
        if (tb < cfg.tail_tol) return X;
    }
    std::ostringstream os;
    os << "shoot: potential tail bound stays above " << cfg.tail_tol << " for every truncation point"
       << " up to X = " << std::max(lambda, 0.0) + margin / 2.0 << " (lambda = " << lambda << ")";
    throw TailError(os.str());
}

PsiSolution psi_backward(const Potential& q, double lambda, const SolverConfig& cfg,
                         const Potential* v) {
    if (!std::isfinite(lambda)) throw InputError("psi_backward: lambda must be finite");
    if (std::abs(lambda) > 1e4) throw InputError("psi_backward: |lambda| must not exceed 1e4");
    const double X = truncation_point(q, lambda, cfg);
    const Terminal t = terminal(X, lambda);
    const std::vector<double> stops = stops_for(q, v);
    const std::vector<double> pts = segment_points(X, lambda);

    PsiSolution out;
    out.lambda = lambda;
    out.X = X;
    State y = t.y0;
    double log_scale = t.log_scale;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        num::Trajectory<4> traj;
        try {
            traj = num::integrate_adaptive<4>(PsiRhs{&q, v, lambda}, pts[k], y, pts[k + 1],
                                              ode_options(cfg), stops);
        } catch (const NumericError& e) {
            std::ostringstream os;
            os << e.what() << " (backward integration, lambda = " << lambda << ", X = " << X << ")";
            throw NumericError(os.str());
        }
        out.rejected_steps += traj.rejected;
        const double s = std::exp(log_scale);
        for (std::size_t i = (k == 0 ? 0 : 1); i < traj.x.size(); ++i) {
            out.x.push_back(traj.x[i]);
            out.psi.push_back(s * traj.y[i][0]);
            out.dpsi.push_back(s * traj.y[i][1]);
        }
        y = traj.y.back();
        if (k + 2 < pts.size()) {
            // Integrals accumulated so far carry the current scale; fold them
            // into the new scale together with psi.
            log_scale += renormalize(y);
            out.segment_breaks.push_back(out.x.size() - 1);
        }
    }
    // Sign changes on consecutive mesh points; the piecewise scales are positive.
    for (std::size_t i = 0; i + 1 < out.psi.size(); ++i)
        if ((out.psi[i] < 0.0 && out.psi[i + 1] > 0.0) || (out.psi[i] > 0.0 && out.psi[i + 1] < 0.0))
            ++out.zero_count;
    const double s = std::exp(log_scale);
    out.psi0 = s * y[0];
    out.dpsi0 = s * y[1];
    // The tail integral is in the terminal scale.
    out.norm_sq_tail = std::exp(2.0 * t.log_scale) * t.tail_scaled;
    out.norm_sq = std::exp(2.0 * log_scale) * y[2] + out.norm_sq_tail;
    out.weighted_sq = std::exp(2.0 * log_scale) * y[3];
    return out;
}

double wronskian_w(const Potential& q, double b, double lambda, const SolverConfig& cfg) {
    const PsiSolution s = psi_backward(q, lambda, cfg);
    return s.dpsi0 - b * s.psi0;
}

PsiDot psi_dot(const Potential& q, const PsiSolution& at, const SolverConfig& cfg) {
    const double h = cfg.fd_step_scale * std::max(1.0, std::abs(at.lambda));
    auto central = [&](double step) {
        const auto p = replay(q, at.lambda + step, at.X, at.x, at.segment_breaks);
        const auto m = replay(q, at.lambda - step, at.X, at.x, at.segment_breaks);
        return std::pair<double, double>{(p.first - m.first) / (2.0 * step),
                                         (p.second - m.second) / (2.0 * step)};
    };
    const auto d1 = central(h);
    const auto d2 = central(0.5 * h);
    PsiDot out;
    out.psi_dot0 = (4.0 * d2.first - d1.first) / 3.0;
    out.dpsi_dot0 = (4.0 * d2.second - d1.second) / 3.0;
    return out;
}

namespace {

double localization_width(long n, const SolverConfig& cfg) {
    const double base = 1.5 * std::numbers::pi * static_cast<double>(n);
    double delta = cfg.bracket_halfwidth_scale * std::pow(base, -2.0 / 3.0 + 1.0 / 12.0);
    // Keep the bracket inside the neighbouring unperturbed gaps.
    const double an = airy_prime_zero(n);
    double gap = airy_prime_zero(n) - airy_prime_zero(n + 1);
    if (n > 1) gap = std::min(gap, airy_prime_zero(n - 1) - an);
    return std::min(delta, 0.45 * gap);
}

struct Located {
    double lambda = 0.0;
    std::pair<double, double> bracket;
};

std::optional<Located> bracket_search(const Potential& q, double b, long n, double seed,
                                      double delta, const SolverConfig& cfg) {
    constexpr int kProbes = 5;
    std::array<double, kProbes + 2> xs{}, ws{};
    for (int i = 0; i < kProbes + 2; ++i) {
        xs[i] = seed - delta + 2.0 * delta * i / (kProbes + 1);
        ws[i] = wronskian_w(q, b, xs[i], cfg);
    }
    int changes = 0, at = -1;
    for (int i = 0; i + 1 < kProbes + 2; ++i) {
        if (ws[i] == 0.0) return Located{xs[i], {xs[i], xs[i]}};
        if ((ws[i] < 0.0) != (ws[i + 1] < 0.0)) {
            ++changes;
            at = i;
        }
    }
    if (changes != 1) return std::nullopt;
    const auto f = [&](double l) { return wronskian_w(q, b, l, cfg); };
    const double xtol = 4e-15 * std::max(1.0, std::abs(seed));
    const auto r = num::brent(f, xs[at], xs[at + 1], ws[at], ws[at + 1], xtol);
    (void)n;
    return Located{r.root, {xs[at], xs[at + 1]}};
}

// Smallest lambda in (lo, hi] where the zero count reaches k, refined to a
// root of psi(0). N(lo) < k <= N(hi) on entry.
double dirichlet_eigenvalue(const Potential& q, long k, double lo, double hi, const SolverConfig& cfg) {
    for (int it = 0; it < 200 && hi - lo > 1e-6 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (psi_backward(q, mid, cfg).zero_count >= k)
            hi = mid;
        else
            lo = mid;
    }
    const auto f = [&](double l) { return psi_backward(q, l, cfg).psi0; };
    const double flo = f(lo), fhi = f(hi);
    if ((flo < 0.0) == (fhi < 0.0)) return 0.5 * (lo + hi);
    return num::brent(f, lo, hi, flo, fhi, 4e-15 * std::max(1.0, std::abs(hi))).root;
}

Located sturm_search(const Potential& q, double b, long n, double floor, double seed,
                     const SolverConfig& cfg) {
    // Lower end with no zeros.
    double lo = floor;
    for (int i = 0; psi_backward(q, lo, cfg).zero_count > 0; ++i) {
        if (i == 20) throw BracketError("shoot: could not find a zero-free lower end for the Sturm count");
        lo = 2.0 * lo - 1.0;
    }
    double hi = std::max(seed, lo + 1.0);
    for (int i = 0; psi_backward(q, hi, cfg).zero_count < n; ++i) {
        if (i == 40) throw BracketError("shoot: could not find an upper end with enough zeros");
        hi += std::max(1.0, 0.5 * std::abs(hi));
    }
    const double mu_hi = dirichlet_eigenvalue(q, n, lo, hi, cfg);
    double mu_lo = lo;
    if (n > 1) mu_lo = dirichlet_eigenvalue(q, n - 1, lo, mu_hi, cfg);
    const auto f = [&](double l) { return wronskian_w(q, b, l, cfg); };
    double flo = f(mu_lo);
    const double fhi = f(mu_hi);
    if (n == 1) {
        for (int i = 0; (flo < 0.0) == (fhi < 0.0); ++i) {
            if (i == 20) throw BracketError("shoot: no sign change of w below the first Dirichlet eigenvalue");
            mu_lo = 2.0 * mu_lo - 1.0;
            flo = f(mu_lo);
        }
    }
    if ((flo < 0.0) == (fhi < 0.0)) {
        std::ostringstream os;
        os << "shoot: no sign change of w between Dirichlet eigenvalues " << mu_lo << " and " << mu_hi
           << " for n = " << n;
        throw BracketError(os.str());
    }
    const auto r = num::brent(f, mu_lo, mu_hi, flo, fhi, 4e-15 * std::max(1.0, std::abs(mu_hi)));
    return {r.root, {mu_lo, mu_hi}};
}

}  // namespace

SpectralPoint eigenvalue(const Potential& q, double b, long n, const SolverConfig& cfg) {
    cfg.validate();
    if (n < 1) throw InputError("eigenvalue: n must be positive");
    if (!std::isfinite(b)) throw InputError("eigenvalue: b must be finite");
    double seed;
    try {
        seed = eig_asym(q, b, n).lambda_pred;
    } catch (const NumericError&) {
        seed = unperturbed_asym(b, n).first;
    }
    SpectralPoint p;
    p.n = n;
    p.seed = seed;
    p.scan_floor = -b * b - (q.is_zero() ? 0.0 : l1_norm(q)) - 2.0;

    const double delta = localization_width(n, cfg);
    std::optional<Located> found;
    std::string primary_failure;
    try {
        found = bracket_search(q, b, n, seed, delta, cfg);
        if (!found) primary_failure = "bracket did not isolate exactly one sign change";
    } catch (const NumericError& e) {
        primary_failure = e.what();
    }
    PsiSolution sol;
    if (found) {
        sol = psi_backward(q, found->lambda, cfg);
        if (sol.zero_count != n - 1) {
            primary_failure = "root in bracket carries " + std::to_string(sol.zero_count) + " zeros";
            found.reset();
        }
    }
    if (!found) {
        try {
            found = sturm_search(q, b, n, p.scan_floor, seed + delta, cfg);
        } catch (const BracketError& e) {
            throw BracketError(std::string(e.what()) + "; primary bracket: " + primary_failure +
                               "; consider a larger bracket_halfwidth_scale");
        }
        p.used_fallback = true;
        sol = psi_backward(q, found->lambda, cfg);
        if (sol.zero_count != n - 1) {
            std::ostringstream os;
            os << "shoot: eigenvalue candidate " << found->lambda << " for n = " << n << " carries "
               << sol.zero_count << " zeros";
            throw AmbiguityError(os.str());
        }
    }
    p.lambda = found->lambda;
    p.bracket = found->bracket;
    p.psi_at_0 = sol.psi0;
    p.psi_prime_at_0 = sol.dpsi0;
    p.norm_sq = sol.norm_sq;
    p.zero_count = sol.zero_count;
    p.w_residual = std::abs(sol.dpsi0 - b * sol.psi0);
    return p;
}

SpectralPoint norming(const Potential& q, double b, const SpectralPoint& eig, const SolverConfig& cfg) {
    SpectralPoint p = eig;
    const PsiSolution sol = psi_backward(q, eig.lambda, cfg);
    const PsiDot d = psi_dot(q, sol, cfg);
    p.psi_at_0 = sol.psi0;
    p.psi_prime_at_0 = sol.dpsi0;
    p.norm_sq = sol.norm_sq;
    p.w_dot = d.dpsi_dot0 - b * d.psi_dot0;
    if (!(sol.norm_sq > 0.0) || sol.psi0 == 0.0)
        throw NumericError("norming: degenerate eigenfunction at lambda = " + std::to_string(eig.lambda));
    p.kappa = std::log(sol.psi0 * sol.psi0 / sol.norm_sq);
    const double ratio = sol.psi0 / p.w_dot;
    std::ostringstream os;
    if (!(ratio > 0.0)) {
        os << "norming: psi(0)/w_dot = " << ratio << " is not positive at n = " << eig.n;
        throw ConsistencyError(os.str());
    }
    p.kappa_cross = std::log(ratio);
    if (std::abs(p.kappa - p.kappa_cross) > cfg.kappa_fail_tol) {
        os << "norming: kappa paths disagree at n = " << eig.n << " (norm path " << p.kappa
           << ", derivative path " << p.kappa_cross << ")";
        throw ConsistencyError(os.str());
    }
    p.has_kappa = true;
    return p;
}

SpectralPoint norming(const Potential& q, double b, long n, const SolverConfig& cfg) {
    return norming(q, b, eigenvalue(q, b, n, cfg), cfg);
}

double unperturbed_eigenvalue(double b, long n) {
    if (n < 1) throw InputError("unperturbed_eigenvalue: n must be positive");
    if (!std::isfinite(b)) throw InputError("unperturbed_eigenvalue: b must be finite");
    const auto f = [b](double l) {
        const AirySample s = airy_eval(-l);
        return s.ai_prime - b * s.ai;
    };
    const double hi = -airy_zero(n);
    const double lo = n == 1 ? -b * b - 2.0 : -airy_zero(n - 1);
    return num::brent(f, lo, hi, 1e-15 * std::max(1.0, hi)).root;
}

GradientReport gradient_audit(const Potential& q, double b, long n, const Potential& v,
                              const SolverConfig& cfg, double epsilon, double tolerance) {
    if (!(epsilon > 0.0)) throw InputError("gradient_audit: epsilon must be positive");
    SolverConfig tight = cfg;
    tight.rtol = std::min(cfg.rtol, 1e-12);
    tight.atol = std::min(cfg.atol, 1e-14);
    GradientReport rep;
    rep.n = n;
    rep.epsilon = epsilon;
    const SpectralPoint eig = eigenvalue(q, b, n, tight);
    rep.lambda = eig.lambda;
    if (v.is_zero()) {
        rep.passed = true;
        return rep;
    }
    const PsiSolution sol = psi_backward(q, eig.lambda, tight, &v);
    rep.quadrature = sol.weighted_sq / sol.norm_sq;

    // Perturbed roots on the frozen mesh of the base solution.
    const std::vector<double>& mesh = sol.x;
    auto root_for = [&](const Potential& qq) {
        const auto f = [&](double l) { return replay_w_scaled(qq, b, l, sol.X, mesh, sol.segment_breaks); };
        double width = epsilon * (4.0 * std::abs(rep.quadrature) + 1e-2);
        for (int i = 0; i < 12; ++i, width *= 4.0) {
            const double a = eig.lambda - width, c = eig.lambda + width;
            const double fa = f(a), fc = f(c);
            if ((fa < 0.0) != (fc < 0.0))
                return num::brent(f, a, c, fa, fc, 1e-15 * std::max(1.0, std::abs(eig.lambda))).root;
        }
        throw BracketError("gradient_audit: could not bracket the perturbed eigenvalue");
    };
    const double lp = root_for(q + epsilon * v);
    const double lm = root_for(q - epsilon * v);
    rep.finite_difference = (lp - lm) / (2.0 * epsilon);
    const double scale = std::max(std::abs(rep.quadrature), std::abs(rep.finite_difference));
    rep.relative_difference = scale == 0.0 ? 0.0 : std::abs(rep.finite_difference - rep.quadrature) / scale;
    rep.passed = rep.relative_difference <= tolerance;
    return rep;
}

}  // namespace stark
