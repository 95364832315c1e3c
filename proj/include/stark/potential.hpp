#pragma once

// Perturbations q on [0, inf) with q and q' square integrable against
// (1 + x)^r. A Potential is an immutable linear combination of family terms,
// so q + eps v and c q are representable without leaving the type.

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace stark {

enum class PotentialFamily { ExpDecay, Gaussian, CompactSpline, PowerDecay, Tabulated };

std::string to_string(PotentialFamily f);

struct QValue {
    double q = 0.0;
    double dq = 0.0;
};

/// Parameters of one term, for reports and reproduction.
struct TermInfo {
    PotentialFamily family{};
    double scale = 1.0;
    std::vector<std::pair<std::string, double>> params;
    std::vector<double> xs;  // tabulated only
    std::vector<double> qs;  // tabulated only
};

/// One family member. Implementations are immutable.
class PotentialTerm {
public:
    virtual ~PotentialTerm() = default;
    virtual PotentialFamily family() const = 0;
    virtual QValue eval(double x) const = 0;
    /// Upper bound for the integral of |q| + |q'| over [X, inf).
    virtual double tail_bound(double X) const = 0;
    /// End of the support (infinity when unbounded).
    virtual double support_end() const { return std::numeric_limits<double>::infinity(); }
    /// Points where the integrand changes character; helps quadrature.
    virtual std::vector<double> breakpoints() const { return {}; }
    /// Throws MembershipError if q or q' has an infinite weighted moment.
    virtual void check_membership(double r) const = 0;
    virtual TermInfo info() const = 0;
};

class Potential {
public:
    /// q == 0 with the default weight exponent r = 2.
    Potential() = default;

    static Potential zero(double r = 2.0);
    /// c exp(-a x), a > 0.
    static Potential exp_decay(double c, double a, double r = 2.0);
    /// c exp(-((x - center)/width)^2), width > 0.
    static Potential gaussian(double c, double center, double width, double r = 2.0);
    /// c (1 - u^2)^2 with u = (x - center)/halfwidth on |u| < 1, zero elsewhere (C^1).
    static Potential compact_spline(double c, double center, double halfwidth, double r = 2.0);
    /// c (1 + x)^{-s}; requires s > (r + 1)/2.
    static Potential power_decay(double c, double s, double r = 2.0);
    /// Cubic spline through (xs, qs), clamped slope qprime0 at x = 0, natural
    /// at the last knot, zero beyond it. xs[0] must be 0.
    static Potential tabulated(std::vector<double> xs, std::vector<double> qs, double qprime0,
                               double r = 2.0);

    /// (q(x), q'(x)); x < 0 is an input error.
    QValue eval(double x) const;
    double operator()(double x) const { return eval(x).q; }
    double q0() const;
    double r() const { return r_; }
    Potential with_r(double r) const;

    double tail_bound(double X) const;
    double support_end() const;
    std::vector<double> breakpoints() const;
    bool is_zero() const { return terms_.empty(); }
    /// The family when the potential is a single unscaled-combination term.
    std::optional<PotentialFamily> family() const;
    std::vector<TermInfo> describe() const;
    const std::vector<std::string>& warnings() const { return warnings_; }
    void check_membership(double r) const;

    Potential operator+(const Potential& other) const;
    Potential operator-(const Potential& other) const { return *this + other * -1.0; }
    Potential operator*(double c) const;
    friend Potential operator*(double c, const Potential& p) { return p * c; }

private:
    struct Term {
        double scale;
        std::shared_ptr<const PotentialTerm> impl;
    };
    static Potential single(std::shared_ptr<const PotentialTerm> impl, double r);

    std::vector<Term> terms_;
    double r_ = 2.0;
    std::vector<std::string> warnings_;
};

enum class PotentialComponent { Value, Derivative };

/// ||f||_{A_r} = ||f||_{L^2((1+x)^r dx)} for f = q or q'.
double norm_Ar(const Potential& q, PotentialComponent component, double r);

struct MembershipReport {
    double norm_q = 0.0;
    double norm_dq = 0.0;
    double norm_frak = 0.0;  // sqrt(norm_q^2 + norm_dq^2)
};

/// Norms at the potential's own weight exponent.
MembershipReport in_frakAr(const Potential& q);

/// ||q||_1.
double l1_norm(const Potential& q);

}  // namespace stark
