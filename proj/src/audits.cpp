#include "stark/audits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/lambert_w.hpp>

#include "stark/airy.hpp"
#include "stark/asymptotics.hpp"
#include "stark/basis.hpp"
#include "stark/errors.hpp"
#include "stark/shoot.hpp"
#include "stark/volterra.hpp"
#include "stark/weights.hpp"

namespace stark {

double lambert_constant(double ratio, double w) {
    if (ratio <= 0.0) return 0.0;
    if (w <= 0.0) return std::numeric_limits<double>::infinity();
    return boost::math::lambert_w0(ratio * w) / w;
}

std::vector<std::pair<std::string, Potential>> builtin_potentials() {
    return {
        {"exp1", Potential::exp_decay(1.0, 1.0)},
        {"exp2", Potential::exp_decay(1.0, 2.0)},
        {"gauss", Potential::gaussian(0.8, 2.0, 1.0)},
        {"bump", Potential::compact_spline(1.0, 1.5, 1.5)},
        {"power", Potential::power_decay(1.0, 2.0)},
    };
}

namespace {

// Sup tracker for one named inequality.
struct Sup {
    std::string name, description;
    double value = 0.0;
    long samples = 0;
    void add(double v) {
        ++samples;
        if (std::isnan(v)) throw NumericError("audit " + name + ": NaN ratio");
        value = std::max(value, v);
    }
    AuditResult result() const { return {name, description, value, std::nullopt, false, samples}; }
};

std::vector<double> log_spaced(double lo, double hi, int count) {
    // lo + (exp(t) - 1) with t uniform, so the grid is dense near lo.
    std::vector<double> out(static_cast<std::size_t>(count));
    const double span = std::log1p(hi - lo);
    for (int i = 0; i < count; ++i) out[i] = lo + std::expm1(span * i / (count - 1));
    out.back() = hi;
    return out;
}

const Potential& named(const std::vector<std::pair<std::string, Potential>>& all, const std::string& n) {
    for (const auto& [k, p] : all)
        if (k == n) return p;
    throw InputError("unknown builtin potential " + n);
}

}  // namespace

std::vector<AuditResult> audit_basis(const AuditOptions& opt) {
    std::vector<Sup> sups;
    for (BasisBound b : kAllBasisBounds) sups.push_back({to_string(b), "sup |f| / envelope", 0.0, 0});
    for (double z : log_spaced(-5.0, 60.0, opt.basis_z_points)) {
        const double x_hi = z + 40.0;
        for (int j = 0; j < opt.basis_x_points; ++j) {
            const double x = x_hi * j / (opt.basis_x_points - 1);
            const BasisSample s = basis_eval(z, x);
            for (std::size_t k = 0; k < sups.size(); ++k) sups[k].add(basis_bound_ratio(kAllBasisBounds[k], s));
        }
    }
    std::vector<AuditResult> out;
    for (const auto& s : sups) out.push_back(s.result());
    return out;
}

std::vector<AuditResult> audit_weights(const AuditOptions& opt) {
    const auto all = builtin_potentials();
    const WeightParams wp(2.0);
    Sup cr{"weights.omega_Cr", "sup omega(q,z) / (||q||_A Omega_r(z))", 0.0, 0};
    for (const auto& [name, q] : all) {
        const double nq = norm_Ar(q, PotentialComponent::Value, 2.0);
        for (double z : log_spaced(-5.0, 200.0, 60)) cr.add(omega(q, z) / (nq * Omega_r(z, wp)));
    }
    Sup rate{"weights.omega_rate", "sup omega(q,lambda_n) / (||q||_A omega_r(n))", 0.0, 0};
    for (const char* name : {"exp1", "exp2", "gauss", "bump"}) {
        const Potential& q = named(all, name);
        const double nq = norm_Ar(q, PotentialComponent::Value, 2.0);
        for (long n = 2; n <= opt.rate_n_max; ++n) {
            const double lam = eigenvalue(q, 0.0, n).lambda;
            rate.add(omega(q, lam) / (nq * omega_r(n, wp)));
        }
    }
    return {cr.result(), rate.result()};
}

std::vector<AuditResult> audit_volterra(double c0_sq, const AuditOptions&) {
    const auto all = builtin_potentials();
    Sup uc{"volterra.upsilon_c", "K for |c - c0| <= K w e^{K w} sigma(z)/sigma(x-z) ch", 0.0, 0};
    Sup ucp{"volterra.upsilon_c_prime", "K for |c' - c0'| <= K w e^{K w} sigma(z) sigma(x-z) ch", 0.0, 0};
    Sup us{"volterra.upsilon_s", "K for |s - s0| <= K w e^{K w} ch / (sigma(z) sigma(x-z))", 0.0, 0};
    Sup usp{"volterra.upsilon_s_prime", "K for |s' - s0'| <= K w e^{K w} sigma(x-z)/sigma(z) ch", 0.0, 0};
    Sup phi{"volterra.phi", "K for |phi - phi0| <= K (1+|b|) w e^{K w} (sigma(z)+1/sigma(z)) ch/sigma(x-z)", 0.0, 0};
    Sup phi0{"volterra.phi0", "sup |phi0| / ((1+|b|)(sigma(z)+1/sigma(z)) ch/sigma(x-z))", 0.0, 0};
    Sup terms{"volterra.c_terms", "sup_k<=6 |c_k| sigma(x-z)/(sigma(z) ch) * k! / (6 C0^2 w)^k", 0.0, 0};
    const double bs[] = {-2.0, 0.0, 1.0};
    for (const char* name : {"exp1", "bump"}) {
        const Potential& q = named(all, name);
        for (double z : {0.0, 1.0, 2.5, 5.0, 10.0, 15.0, 25.0, 40.0}) {
            const double w = omega(q, z);
            const double x_max = z + 10.0;
            const PicardSeries c = picard_c(q, z, x_max);
            const PicardSeries s = picard_s(q, z, x_max);
            for (std::size_t i = 1; i < c.x.size(); ++i) {
                const double x = c.x[i];
                const double sz = sigma(z), sxz = sigma(x - z);
                const double h = ch(z, x);
                const double dc = c.value[i] - c.terms[0][i], dcp = c.deriv[i] - c.terms_prime[0][i];
                const double ds = s.value[i] - s.terms[0][i], dsp = s.deriv[i] - s.terms_prime[0][i];
                uc.add(lambert_constant(std::abs(dc) / (sz / sxz * h), w));
                ucp.add(lambert_constant(std::abs(dcp) / (sz * sxz * h), w));
                us.add(lambert_constant(std::abs(ds) / (h / (sz * sxz)), w));
                usp.add(lambert_constant(std::abs(dsp) / (sxz / sz * h), w));
                for (double b : bs) {
                    const double env = (1.0 + std::abs(b)) * (sz + 1.0 / sz) * h / sxz;
                    phi.add(lambert_constant(std::abs(dc + b * ds) / env, w));
                    phi0.add(std::abs(c.terms[0][i] + b * s.terms[0][i]) / env);
                }
                double fact = 1.0;
                for (int k = 1; k <= 6 && k < static_cast<int>(c.terms.size()); ++k) {
                    fact *= k;
                    const double bound = std::pow(6.0 * c0_sq * w, k) / fact;
                    terms.add(std::abs(c.terms[k][i]) * sxz / (sz * h) / bound);
                }
            }
        }
    }
    return {uc.result(), ucp.result(), us.result(), usp.result(), phi.result(), phi0.result(), terms.result()};
}

double denominator_ratio(long n, double norm_sq) {
    const double scale = std::cbrt(1.5 * std::numbers::pi * static_cast<double>(n));
    return std::abs(norm_sq / scale - 1.0) * std::cbrt(static_cast<double>(n));
}

std::vector<AuditResult> audit_shoot(const AuditOptions& opt) {
    const auto all = builtin_potentials();
    Sup xi{"shoot.xi", "K for |psi(q,z,0) - psi0(z,0)| <= K w e^{K w} g_A(-z)/sigma(-z)", 0.0, 0};
    for (const char* name : {"exp1", "exp2", "gauss", "bump"}) {
        const Potential& q = named(all, name);
        for (double z : log_spaced(0.0, 60.0, 40)) {
            const PsiSolution sol = psi_backward(q, z);
            const double p0 = std::sqrt(std::numbers::pi) * airy_ai(-z);
            xi.add(lambert_constant(std::abs(sol.psi0 - p0) / (g_A(-z) / sigma(-z)), omega(q, z)));
        }
    }
    const WeightParams wp(2.0);
    Sup alpha{"asymptotics.alpha", "sup |alpha_n (-1)^{n+1} (3 pi n/2)^{1/6} - 1| / omega_r(n)^2", 0.0, 0};
    Sup beta{"asymptotics.beta_prime", "sup |beta_n' (-1)^{n+1} (3 pi n/2)^{-1/6} - 1| / omega_r(n)^2", 0.0, 0};
    Sup den{kDenominatorBaseline, "sup | ||psi_n||^2 / (3 pi n/2)^{1/3} - 1 | n^{1/3}", 0.0, 0};
    const Potential zero;
    const Potential& exp2 = named(all, "exp2");
    for (double b : {0.0, 1.0}) {
        for (long n = 2; n <= opt.rate_n_max; ++n) {
            const SpectralPoint p = eigenvalue(exp2, b, n);
            const AlphaBeta ab = alpha_beta(b, n, p.lambda);
            const double w2 = omega_r(n, wp) * omega_r(n, wp);
            alpha.add(std::abs(ab.alpha_normalized - 1.0) / w2);
            beta.add(std::abs(ab.beta_prime_normalized - 1.0) / w2);
            if (n >= 5) {
                den.add(denominator_ratio(n, p.norm_sq));
                den.add(denominator_ratio(n, eigenvalue(zero, b, n).norm_sq));
            }
        }
    }
    return {xi.result(), alpha.result(), beta.result(), den.result()};
}

std::vector<AuditResult> measure_envelope_audits(const AuditOptions& opt,
                                                 const std::function<void(const AuditResult&)>& progress) {
    std::vector<AuditResult> all;
    auto push = [&](std::vector<AuditResult> part) {
        for (auto& r : part) {
            if (progress) progress(r);
            all.push_back(std::move(r));
        }
    };
    auto basis = audit_basis(opt);
    // Shared constant of the psi0/theta0 bounds (theta0 carries an extra factor 2).
    double c0 = 0.0;
    for (const auto& r : basis) {
        if (r.name == "basis.psi0" || r.name == "basis.psi0_prime") c0 = std::max(c0, r.measured);
        if (r.name == "basis.theta0" || r.name == "basis.theta0_prime") c0 = std::max(c0, r.measured / 2.0);
    }
    push(std::move(basis));
    push(audit_weights(opt));
    push(audit_volterra(c0 * c0, opt));
    push(audit_shoot(opt));
    return all;
}

void compare_with_baselines(std::vector<AuditResult>& results, const Baselines& b) {
    for (auto& r : results) {
        r.baseline = b.get(r.name);
        r.passed = r.baseline && std::isfinite(r.measured) && r.measured <= *r.baseline;
    }
}

Baselines freeze(const std::vector<AuditResult>& results) {
    Baselines b;
    for (const auto& r : results) b.set(r.name, r.measured * kBaselineHeadroom);
    return b;
}

}  // namespace stark
