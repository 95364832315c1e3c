#include "airy_oracle.hpp"

#include <mpfr.h>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace stark::oracle {
namespace {

class Mp {
public:
    explicit Mp(mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
    ~Mp() { mpfr_clear(v_); }
    Mp(const Mp&) = delete;
    Mp& operator=(const Mp&) = delete;
    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }

private:
    mpfr_t v_;
};

struct Values {
    std::vector<double> d;
    std::string ai_digits;
};

// Ai, Ai', Bi, Bi' at x with working precision `prec`; also returns the
// four values as mpfr numbers through `out` for the stability comparison.
void evaluate(double xd, mpfr_prec_t prec, Mp (&out)[4]) {
    Mp x(prec), x3(prec), f(prec), g(prec), fp(prec), gp(prec), ft(prec), gt(prec), tmp(prec),
        eps(prec), c1(prec), c2(prec), b1(prec), b2(prec), third(prec), gam(prec);
    mpfr_set_d(x.get(), xd, MPFR_RNDN);
    mpfr_pow_ui(x3.get(), x.get(), 3, MPFR_RNDN);

    // Ai(0) = 3^{-2/3}/Gamma(2/3), -Ai'(0) = 3^{-1/3}/Gamma(1/3)
    mpfr_set_ui(third.get(), 1, MPFR_RNDN);
    mpfr_div_ui(third.get(), third.get(), 3, MPFR_RNDN);
    mpfr_mul_ui(tmp.get(), third.get(), 2, MPFR_RNDN);
    mpfr_gamma(gam.get(), tmp.get(), MPFR_RNDN);  // Gamma(2/3)
    mpfr_set_ui(c1.get(), 3, MPFR_RNDN);
    mpfr_neg(tmp.get(), tmp.get(), MPFR_RNDN);
    mpfr_pow(c1.get(), c1.get(), tmp.get(), MPFR_RNDN);
    mpfr_div(c1.get(), c1.get(), gam.get(), MPFR_RNDN);  // Ai(0)
    mpfr_gamma(gam.get(), third.get(), MPFR_RNDN);        // Gamma(1/3)
    mpfr_set_ui(c2.get(), 3, MPFR_RNDN);
    mpfr_neg(tmp.get(), third.get(), MPFR_RNDN);
    mpfr_pow(c2.get(), c2.get(), tmp.get(), MPFR_RNDN);
    mpfr_div(c2.get(), c2.get(), gam.get(), MPFR_RNDN);  // -Ai'(0)
    // Bi(0) = sqrt(3) Ai(0), Bi'(0) = -sqrt(3) Ai'(0)
    mpfr_sqrt_ui(tmp.get(), 3, MPFR_RNDN);
    mpfr_mul(b1.get(), c1.get(), tmp.get(), MPFR_RNDN);
    mpfr_mul(b2.get(), c2.get(), tmp.get(), MPFR_RNDN);

    mpfr_set_ui(f.get(), 1, MPFR_RNDN);
    mpfr_set(g.get(), x.get(), MPFR_RNDN);
    mpfr_set_ui(fp.get(), 0, MPFR_RNDN);
    mpfr_set_ui(gp.get(), 1, MPFR_RNDN);
    mpfr_set_ui(ft.get(), 1, MPFR_RNDN);
    mpfr_set(gt.get(), x.get(), MPFR_RNDN);
    mpfr_set_ui(eps.get(), 1, MPFR_RNDN);
    mpfr_mul_2si(eps.get(), eps.get(), -static_cast<long>(prec) - 8, MPFR_RNDN);
    for (unsigned long k = 1; k < 100000; ++k) {
        const unsigned long k3 = 3 * k;
        mpfr_mul(ft.get(), ft.get(), x3.get(), MPFR_RNDN);
        mpfr_div_ui(ft.get(), ft.get(), (k3 - 1) * k3, MPFR_RNDN);
        mpfr_mul(gt.get(), gt.get(), x3.get(), MPFR_RNDN);
        mpfr_div_ui(gt.get(), gt.get(), k3 * (k3 + 1), MPFR_RNDN);
        mpfr_add(f.get(), f.get(), ft.get(), MPFR_RNDN);
        mpfr_add(g.get(), g.get(), gt.get(), MPFR_RNDN);
        if (xd != 0.0) {
            mpfr_mul_ui(tmp.get(), ft.get(), k3, MPFR_RNDN);
            mpfr_div(tmp.get(), tmp.get(), x.get(), MPFR_RNDN);
            mpfr_add(fp.get(), fp.get(), tmp.get(), MPFR_RNDN);
            mpfr_mul_ui(tmp.get(), gt.get(), k3 + 1, MPFR_RNDN);
            mpfr_div(tmp.get(), tmp.get(), x.get(), MPFR_RNDN);
            mpfr_add(gp.get(), gp.get(), tmp.get(), MPFR_RNDN);
        }
        if (k > 4 && mpfr_cmpabs(ft.get(), eps.get()) < 0 && mpfr_cmpabs(gt.get(), eps.get()) < 0) break;
    }
    // Ai = c1 F - c2 G, Ai' = c1 F' - c2 G', Bi = b1 F + b2 G, Bi' = b1 F' + b2 G'
    auto combine = [&](Mp& dst, Mp& a, Mp& fa, Mp& b, Mp& gb, bool plus) {
        mpfr_mul(dst.get(), a.get(), fa.get(), MPFR_RNDN);
        mpfr_mul(tmp.get(), b.get(), gb.get(), MPFR_RNDN);
        if (plus)
            mpfr_add(dst.get(), dst.get(), tmp.get(), MPFR_RNDN);
        else
            mpfr_sub(dst.get(), dst.get(), tmp.get(), MPFR_RNDN);
    };
    combine(out[0], c1, f, c2, g, false);
    combine(out[1], c1, fp, c2, gp, false);
    combine(out[2], b1, f, b2, g, true);
    combine(out[3], b1, fp, b2, gp, true);
}

bool agree(const Mp& a, const Mp& b, int digits, mpfr_prec_t prec) {
    Mp diff(prec), scale(prec), tol(prec);
    mpfr_sub(diff.get(), a.get(), b.get(), MPFR_RNDN);
    mpfr_abs(diff.get(), diff.get(), MPFR_RNDN);
    mpfr_abs(scale.get(), a.get(), MPFR_RNDN);
    if (mpfr_cmp_ui(scale.get(), 1) < 0) mpfr_set_ui(scale.get(), 1, MPFR_RNDN);
    mpfr_set_ui(tol.get(), 10, MPFR_RNDN);
    mpfr_pow_si(tol.get(), tol.get(), -digits - 2, MPFR_RNDN);
    mpfr_mul(tol.get(), tol.get(), scale.get(), MPFR_RNDN);
    return mpfr_cmp(diff.get(), tol.get()) <= 0;
}

}  // namespace

AiryReference airy_reference(double x, int digits) {
    mpfr_prec_t prec = 128;
    for (int round = 0; round < 12; ++round, prec *= 2) {
        Mp lo[4] = {Mp(prec), Mp(prec), Mp(prec), Mp(prec)};
        Mp hi[4] = {Mp(2 * prec), Mp(2 * prec), Mp(2 * prec), Mp(2 * prec)};
        evaluate(x, prec, lo);
        evaluate(x, 2 * prec, hi);
        bool ok = true;
        for (int i = 0; i < 4; ++i) ok = ok && agree(hi[i], lo[i], digits, 2 * prec);
        if (!ok) continue;
        AiryReference r;
        r.ai = mpfr_get_d(hi[0].get(), MPFR_RNDN);
        r.ai_prime = mpfr_get_d(hi[1].get(), MPFR_RNDN);
        r.bi = mpfr_get_d(hi[2].get(), MPFR_RNDN);
        r.bi_prime = mpfr_get_d(hi[3].get(), MPFR_RNDN);
        std::vector<char> buf(static_cast<std::size_t>(digits) + 64);
        mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, hi[0].get());
        r.ai_digits = buf.data();
        r.bits_used = static_cast<int>(2 * prec);
        return r;
    }
    throw std::runtime_error("airy_reference: precision doubling did not stabilise");
}

double airy_zero_reference(double seed, bool kind_prime) {
    double x = seed;
    for (int it = 0; it < 60; ++it) {
        const AiryReference r = airy_reference(x, 20);
        const double fx = kind_prime ? r.ai_prime : r.ai;
        const double dfx = kind_prime ? x * r.ai : r.ai_prime;
        const double step = fx / dfx;
        x -= step;
        if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    return x;
}

}  // namespace stark::oracle
