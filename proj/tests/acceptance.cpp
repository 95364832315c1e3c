// Acceptance run: one PASS/FAIL line per criterion, followed by indented
// diagnostics. Exit status is the number of failing criteria that were not
// named with --expect-fail (a known, documented failure still prints FAIL).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracle/airy_oracle.hpp"
#include "stark/airy.hpp"
#include "stark/asymptotics.hpp"
#include "stark/audits.hpp"
#include "stark/errors.hpp"
#include "stark/harness.hpp"
#include "stark/numerics/ode.hpp"
#include "stark/shoot.hpp"
#include "stark/volterra.hpp"

using namespace stark;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool passed = true;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        if (!ok) passed = false;
        notes.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
    }
    void note(const std::string& what) { notes.push_back("     " + what); }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

std::string slope_text(const VerificationReport& r) {
    return r.fitted_slope ? fmt(*r.fitted_slope) : std::string("n/a");
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// --- 1 -----------------------------------------------------------------------
Outcome airy_core() {
    Outcome o;
    std::vector<double> xs;
    for (int i = 0; i < 500; ++i) xs.push_back(-10.0 + 20.0 * i / 499.0);
    std::vector<oracle::AiryReference> refs;
    for (double x : xs) refs.push_back(oracle::airy_reference(x, 25));

    const auto t0 = Clock::now();
    double err_ai = 0.0, err_aip = 0.0, err_w = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const auto s = airy_eval(xs[i]);
        err_ai = std::max(err_ai, std::abs(s.ai - refs[i].ai));
        err_aip = std::max(err_aip, std::abs(s.ai_prime - refs[i].ai_prime));
    }
    for (int i = 0; i <= 6000; ++i) {
        const auto s = airy_eval(-30.0 + 60.0 * i / 6000.0);
        err_w = std::max(err_w, std::abs(s.ai * s.bi_prime - s.ai_prime * s.bi - 1.0 / std::numbers::pi));
    }
    const double secs = seconds_since(t0);
    o.require(err_ai <= 1e-12, "max |Ai - oracle| on |x| <= 10 (500 points) = " + fmt(err_ai));
    o.require(err_aip <= 1e-12, "max |Ai' - oracle| = " + fmt(err_aip));
    o.require(err_w <= 1e-10, "max |W - 1/pi| on [-30, 30] = " + fmt(err_w));
    o.require(secs < 5.0, "library time " + fmt(secs) + " s");
    return o;
}

// --- 2 -----------------------------------------------------------------------
Outcome zeros() {
    Outcome o;
    const auto t0 = Clock::now();
    const auto ap = AiryZeroTable::build(AiryZeroKind::AiPrime, 200);
    double worst = 0.0;
    std::vector<std::pair<long, double>> res;
    for (long n = 1; n <= 200; ++n) {
        worst = std::max(worst, std::abs(airy_ai_prime(ap(n))));
        res.emplace_back(n, ap(n) - mcmahon_guess(n, AiryZeroKind::AiPrime));
    }
    const auto fit = rate_fit(res);
    const double secs = seconds_since(t0);
    o.require(worst <= 1e-11, "max |Ai'(a_n')|, n <= 200 = " + fmt(worst));
    o.require(fit.slope >= -1.5 && fit.slope <= -1.15, "McMahon residual slope " + fmt(fit.slope) + " in [-1.5, -1.15]");
    o.require(secs < 5.0, "time " + fmt(secs) + " s");
    return o;
}

// --- 3 -----------------------------------------------------------------------
Outcome unperturbed() {
    Outcome o;
    const auto t0 = Clock::now();
    for (double b : {-1.0, 0.0, 0.5, 2.0})
        for (const char* c : {"unperturbed-eig", "unperturbed-kappa"}) {
            CampaignConfig cfg;
            cfg.campaign = c;
            cfg.b = b;
            cfg.ns = parse_n_list("5..120");
            const auto r = cmd_verify(cfg);
            std::string what = std::string(c) + " b = " + fmt(b);
            if (r.fitted_slope)
                what += ": slope " + slope_text(r) + " in [-1.6, -1.1]";
            else
                what += ": " + (r.messages.empty() ? std::string() : r.messages.back());
            o.require(r.passed, what);
        }
    // b = 0 against the zeros directly.
    double worst = 0.0;
    for (long n = 1; n <= 120; ++n) worst = std::max(worst, std::abs(unperturbed_eigenvalue(0.0, n) + airy_prime_zero(n)));
    o.require(worst <= 1e-8, "b = 0: max |lambda_n + a_n'| = " + fmt(worst));
    const double secs = seconds_since(t0);
    o.require(secs < 30.0, "time " + fmt(secs) + " s");
    return o;
}

// --- 4 -----------------------------------------------------------------------
Outcome zero_potential_pipeline() {
    Outcome o;
    const auto t0 = Clock::now();
    double el = 0.0, ek = 0.0;
    for (long n = 1; n <= 50; ++n) {
        const auto p = norming(Potential{}, 0.0, n);
        const double ap = airy_prime_zero(n);
        el = std::max(el, std::abs(p.lambda + ap));
        ek = std::max(ek, std::abs(p.kappa + std::log(-ap)));
    }
    const double secs = seconds_since(t0);
    o.require(el <= 1e-8, "max |lambda_n + a_n'|, n <= 50 = " + fmt(el));
    o.require(ek <= 1e-7, "max |kappa_n + log(-a_n')| = " + fmt(ek));
    o.require(secs < 60.0, "time " + fmt(secs) + " s");
    return o;
}

VerificationReport exp2_campaign(const std::string& campaign, double b) {
    CampaignConfig cfg;
    cfg.campaign = campaign;
    cfg.potential = PotentialSpec::builtin("exp2");
    cfg.r = 2.0;
    cfg.b = b;
    cfg.ns = parse_n_list("5..60");
    return cmd_verify(cfg);
}

// Slope over the tail n >= from of a report, for diagnostics only.
double tail_slope(const VerificationReport& r, long from) {
    std::vector<std::pair<long, double>> res;
    for (const auto& row : r.rows)
        if (row.n >= from) res.emplace_back(row.n, row.residual);
    return rate_fit(res).slope;
}

// --- 5 -----------------------------------------------------------------------
Outcome eigenvalue_rate() {
    Outcome o;
    const auto t0 = Clock::now();
    for (double b : {0.0, 1.0}) {
        const auto r = exp2_campaign("eig", b);
        o.require(r.passed, "q = exp(-2x), b = " + fmt(b) + ": slope " + slope_text(r) + " in [-1.6, -0.8], jitter <= 3");
        for (const auto& m : r.messages) o.note(m);
        if (!r.passed) {
            long sign_changes = 0;
            for (std::size_t i = 1; i < r.rows.size(); ++i)
                sign_changes += (r.rows[i].residual > 0) != (r.rows[i - 1].residual > 0);
            o.note("residual sign changes over the range: " + std::to_string(sign_changes));
            o.note("slope over n = 8..60: " + fmt(tail_slope(r, 8)) + ", n = 20..60: " + fmt(tail_slope(r, 20)));
        }
    }
    const double secs = seconds_since(t0);
    o.require(secs < 300.0, "time " + fmt(secs) + " s");
    return o;
}

// --- 6 -----------------------------------------------------------------------
Outcome norming_rate() {
    Outcome o;
    const auto t0 = Clock::now();
    for (double b : {0.0, 1.0}) {
        const auto r = exp2_campaign("kappa", b);
        const bool slope_ok = r.fitted_slope && *r.fitted_slope >= -1.3 && *r.fitted_slope <= -0.55;
        o.require(slope_ok, "q = exp(-2x), b = " + fmt(b) + ": slope " + slope_text(r) + " in [-1.3, -0.55]");
        double worst = 0.0;
        const auto q = Potential::exp_decay(1.0, 2.0);
        for (const auto& row : r.rows) {
            const auto p = norming(q, b, row.n);
            worst = std::max(worst, std::abs(p.kappa - p.kappa_cross) / std::max(1.0, std::abs(p.kappa)));
        }
        o.require(worst <= 1e-5, "  kappa paths: max relative difference " + fmt(worst));
        o.require(r.passed, "  campaign report passed");
    }
    const double secs = seconds_since(t0);
    o.require(secs < 300.0, "time " + fmt(secs) + " s");
    return o;
}

// --- 7 -----------------------------------------------------------------------
Outcome denominator() {
    Outcome o;
    const auto frozen = Baselines::load(baselines_path()).get(kDenominatorBaseline);
    o.require(frozen.has_value(), "frozen C = " + (frozen ? fmt(*frozen) : std::string("missing")));
    for (const char* q : {"zero", "exp2"})
        for (double b : {0.0, 1.0}) {
            CampaignConfig cfg;
            cfg.campaign = "denominator";
            cfg.potential = PotentialSpec::builtin(q);
            cfg.b = b;
            cfg.ns = parse_n_list("5..60");
            const auto r = cmd_verify(cfg);
            bool band = frozen.has_value();
            double worst = 0.0;
            for (const auto& row : r.rows) {
                const double dev = std::abs(row.residual) * std::cbrt(static_cast<double>(row.n));
                worst = std::max(worst, dev);
                if (frozen && dev > *frozen) band = false;
            }
            o.require(band, std::string("q = ") + q + ", b = " + fmt(b) + ": max n^{1/3} |ratio - 1| = " + fmt(worst));
        }
    return o;
}

// --- 8 -----------------------------------------------------------------------
Outcome gradient() {
    Outcome o;
    const std::pair<Potential, Potential> cases[] = {
        {Potential{}, Potential::exp_decay(1.0, 1.0)},
        {Potential::exp_decay(1.0, 2.0), Potential::compact_spline(1.0, 1.5, 1.5)},
    };
    const char* names[] = {"(0, exp(-x))", "(exp(-2x), bump)"};
    for (int c = 0; c < 2; ++c)
        for (long n : {1, 3, 10}) {
            const auto g = gradient_audit(cases[c].first, 0.0, n, cases[c].second);
            o.require(g.relative_difference <= 1e-4, std::string(names[c]) + " n = " + std::to_string(n) +
                                                         ": relative difference " + fmt(g.relative_difference));
        }
    return o;
}

// --- 9 -----------------------------------------------------------------------
Outcome picard_vs_ode() {
    Outcome o;
    const std::pair<const char*, Potential> qs[] = {{"exp(-x)", Potential::exp_decay(1.0, 1.0)},
                                                    {"bump", Potential::compact_spline(1.0, 1.5, 1.5)}};
    num::OdeOptions opt;
    opt.rtol = 1e-13;
    opt.atol = 1e-15;
    opt.max_step = 0.05;
    for (const auto& [name, q] : qs)
        for (double z : {1.0, 5.0, 15.0}) {
            const auto c = picard_c(q, z, 10.0), s = picard_s(q, z, 10.0);
            auto rhs = [&, z](double x, const num::OdeState<2>& y, num::OdeState<2>& dy) {
                dy[0] = y[1];
                dy[1] = (x + q(x) - z) * y[0];
            };
            const auto bps = q.breakpoints();
            double dev = 0.0, wabs = 0.0, wrel = 0.0;
            for (int which = 0; which < 2; ++which) {
                const PicardSeries& p = which == 0 ? c : s;
                const num::OdeState<2> y0 = which == 0 ? num::OdeState<2>{1.0, 0.0} : num::OdeState<2>{0.0, 1.0};
                const auto traj = num::integrate_adaptive<2>(rhs, 0.0, y0, 10.0, opt, bps);
                for (std::size_t i = 0; i < traj.x.size(); ++i) {
                    const auto [f, df] = p.eval(traj.x[i]);
                    dev = std::max(dev, std::abs(f - traj.y[i][0]) / std::max(1.0, std::abs(traj.y[i][0])));
                    dev = std::max(dev, std::abs(df - traj.y[i][1]) / std::max(1.0, std::abs(traj.y[i][1])));
                }
            }
            for (std::size_t i = 0; i < c.x.size(); ++i) {
                const double a = c.value[i] * s.deriv[i], b = c.deriv[i] * s.value[i];
                wabs = std::max(wabs, std::abs(a - b - 1.0));
                wrel = std::max(wrel, std::abs(a - b - 1.0) / std::max(1.0, std::abs(a) + std::abs(b)));
            }
            const std::string tag = std::string("q = ") + name + ", z = " + fmt(z);
            o.require(dev <= 1e-7, tag + ": sup |Picard - ODE| / max(1, |ODE|) = " + fmt(dev));
            o.require(wrel <= 1e-8, tag + ": Wronskian |W - 1| / max(1, |c s'| + |c' s|) = " + fmt(wrel) +
                                        " (absolute " + fmt(wabs) + ")");
        }
    return o;
}

// --- 10 ----------------------------------------------------------------------
Outcome envelope() {
    Outcome o;
    const std::string path = baselines_path();
    auto slurp = [&] {
        std::ifstream in(path);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const std::string before = slurp();
    CampaignConfig cfg;
    cfg.campaign = "envelope";
    const auto r = cmd_envelope(cfg, Baselines::load(path), std::nullopt);
    for (const auto& a : r.audits)
        o.require(a.passed, a.name + ": " + fmt(a.measured) + " <= " + (a.baseline ? fmt(*a.baseline) : "missing"));
    o.require(!before.empty() && slurp() == before, "baseline file unchanged by a non-freeze run");
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    std::set<std::size_t> expected_failures;
    for (int i = 1; i < argc; ++i) {
        if (std::string(argv[i]) == "--expect-fail" && i + 1 < argc) {
            expected_failures.insert(std::stoul(argv[++i]));
        } else {
            std::fprintf(stderr, "usage: acceptance [--expect-fail N]...\n");
            return 2;
        }
    }
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"Airy core", airy_core},
        {"Airy zeros", zeros},
        {"unperturbed spectral data", unperturbed},
        {"zero potential through the ODE pipeline", zero_potential_pipeline},
        {"eigenvalue asymptotics", eigenvalue_rate},
        {"norming constant asymptotics", norming_rate},
        {"denominator band", denominator},
        {"gradient identity", gradient},
        {"Picard series versus ODE", picard_vs_ode},
        {"envelope audits", envelope},
    };
    int failed = 0, unexpected = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = Clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        const bool known = expected_failures.count(i + 1) > 0;
        failed += !o.passed;
        unexpected += !o.passed && !known;
        std::printf("%s criterion %zu: %s (%.1f s)%s\n", o.passed ? "PASS" : "FAIL", i + 1, criteria[i].first,
                    seconds_since(t0), !o.passed && known ? " [known failure, see README]" : "");
        for (const auto& n : o.notes) std::printf("    %s\n", n.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed (%d unexpected)\n", failed, criteria.size(), unexpected);
    return unexpected;
}
