#include "stark/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "stark/errors.hpp"
#include "stark/numerics/quadrature.hpp"

namespace stark {

std::string to_string(PotentialFamily f) {
    switch (f) {
        case PotentialFamily::ExpDecay: return "exp_decay";
        case PotentialFamily::Gaussian: return "gaussian";
        case PotentialFamily::CompactSpline: return "compact_spline";
        case PotentialFamily::PowerDecay: return "power_decay";
        case PotentialFamily::Tabulated: return "tabulated";
    }
    return "unknown";
}

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw InputError(what);
}

class ExpDecay final : public PotentialTerm {
public:
    ExpDecay(double c, double a) : c_(c), a_(a) {
        require(std::isfinite(c) && std::isfinite(a) && a > 0.0, "exp_decay: need finite c and a > 0");
    }
    PotentialFamily family() const override { return PotentialFamily::ExpDecay; }
    QValue eval(double x) const override {
        const double v = c_ * std::exp(-a_ * x);
        return {v, -a_ * v};
    }
    double tail_bound(double X) const override {
        return std::abs(c_) * (1.0 + a_) / a_ * std::exp(-a_ * std::max(X, 0.0));
    }
    void check_membership(double) const override {}
    TermInfo info() const override { return {family(), 1.0, {{"c", c_}, {"a", a_}}, {}, {}}; }

private:
    double c_, a_;
};

class Gaussian final : public PotentialTerm {
public:
    Gaussian(double c, double center, double width) : c_(c), m_(center), w_(width) {
        require(std::isfinite(c) && std::isfinite(center) && std::isfinite(width) && width > 0.0,
                "gaussian: need finite parameters and width > 0");
    }
    PotentialFamily family() const override { return PotentialFamily::Gaussian; }
    QValue eval(double x) const override {
        const double u = (x - m_) / w_;
        const double v = c_ * std::exp(-u * u);
        return {v, -2.0 * u / w_ * v};
    }
    double tail_bound(double X) const override {
        X = std::max(X, 0.0);
        const double u = (X - m_) / w_;
        const double mass = std::abs(c_) * w_ * std::sqrt(std::numbers::pi) / 2.0 * std::erfc(u);
        const double qX = std::abs(c_) * std::exp(-u * u);
        const double variation = X >= m_ ? qX : 2.0 * std::abs(c_) - qX;
        return mass + variation;
    }
    std::vector<double> breakpoints() const override { return {m_}; }
    void check_membership(double) const override {}
    TermInfo info() const override {
        return {family(), 1.0, {{"c", c_}, {"center", m_}, {"width", w_}}, {}, {}};
    }

private:
    double c_, m_, w_;
};

class CompactSpline final : public PotentialTerm {
public:
    CompactSpline(double c, double center, double halfwidth) : c_(c), m_(center), h_(halfwidth) {
        require(std::isfinite(c) && std::isfinite(center) && std::isfinite(halfwidth) &&
                    halfwidth > 0.0 && center + halfwidth > 0.0,
                "compact_spline: need finite parameters, halfwidth > 0 and support meeting x >= 0");
    }
    PotentialFamily family() const override { return PotentialFamily::CompactSpline; }
    QValue eval(double x) const override {
        const double u = (x - m_) / h_;
        if (std::abs(u) >= 1.0) return {0.0, 0.0};
        const double s = 1.0 - u * u;
        return {c_ * s * s, -4.0 * c_ * u * s / h_};
    }
    double tail_bound(double X) const override {
        const double end = m_ + h_;
        if (X >= end) return 0.0;
        const double length = std::min(end - std::max(X, m_ - h_), 2.0 * h_);
        return std::abs(c_) * (std::max(length, 0.0) + 2.0);
    }
    double support_end() const override { return m_ + h_; }
    std::vector<double> breakpoints() const override { return {m_ - h_, m_, m_ + h_}; }
    void check_membership(double) const override {}
    TermInfo info() const override {
        return {family(), 1.0, {{"c", c_}, {"center", m_}, {"halfwidth", h_}}, {}, {}};
    }

private:
    double c_, m_, h_;
};

class PowerDecay final : public PotentialTerm {
public:
    PowerDecay(double c, double s) : c_(c), s_(s) {
        require(std::isfinite(c) && std::isfinite(s) && s > 1.0, "power_decay: need finite c and s > 1");
    }
    PotentialFamily family() const override { return PotentialFamily::PowerDecay; }
    QValue eval(double x) const override {
        const double v = c_ * std::pow(1.0 + x, -s_);
        return {v, -s_ * v / (1.0 + x)};
    }
    double tail_bound(double X) const override {
        const double b = 1.0 + std::max(X, 0.0);
        return std::abs(c_) * (std::pow(b, 1.0 - s_) / (s_ - 1.0) + std::pow(b, -s_));
    }
    void check_membership(double r) const override {
        if (!(s_ > (r + 1.0) / 2.0)) {
            std::ostringstream os;
            os << "power_decay: integral of q^2 (1+x)^r diverges (need s > (r+1)/2 = "
               << (r + 1.0) / 2.0 << ", got s = " << s_ << ")";
            throw MembershipError(os.str());
        }
        // s + 1 > (r + 1)/2 follows.
    }
    TermInfo info() const override { return {family(), 1.0, {{"c", c_}, {"s", s_}}, {}, {}}; }

private:
    double c_, s_;
};

class Tabulated final : public PotentialTerm {
public:
    Tabulated(std::vector<double> xs, std::vector<double> qs, double qprime0)
        : xs_(std::move(xs)), qs_(std::move(qs)), qprime0_(qprime0) {
        require(xs_.size() >= 3 && xs_.size() == qs_.size(),
                "tabulated: need at least 3 knots and matching x/q lengths");
        require(xs_.front() == 0.0, "tabulated: first knot must be x = 0");
        for (std::size_t i = 1; i < xs_.size(); ++i)
            require(xs_[i] > xs_[i - 1], "tabulated: knots must be strictly increasing");
        for (double v : qs_) require(std::isfinite(v), "tabulated: non-finite q value");
        require(std::isfinite(qprime0_), "tabulated: non-finite qprime0");
        build_spline();
        build_tail();
    }
    PotentialFamily family() const override { return PotentialFamily::Tabulated; }
    QValue eval(double x) const override {
        if (x >= xs_.back()) return {0.0, 0.0};
        const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
        const std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - xs_.begin() - 1, 0));
        const double h = xs_[i + 1] - xs_[i];
        const double a = (xs_[i + 1] - x) / h, b = (x - xs_[i]) / h;
        const double q = a * qs_[i] + b * qs_[i + 1] +
                         ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
        const double dq = (qs_[i + 1] - qs_[i]) / h -
                          (3.0 * a * a - 1.0) / 6.0 * h * m_[i] + (3.0 * b * b - 1.0) / 6.0 * h * m_[i + 1];
        return {q, dq};
    }
    double tail_bound(double X) const override {
        if (X >= xs_.back()) return 0.0;
        X = std::max(X, 0.0);
        const auto it = std::upper_bound(xs_.begin(), xs_.end(), X);
        const std::size_t i = static_cast<std::size_t>(it - xs_.begin());  // first knot > X
        const double partial = segment_variation(X, xs_[i]);
        return partial + tail_from_knot_[i];
    }
    double support_end() const override { return xs_.back(); }
    std::vector<double> breakpoints() const override { return {xs_.back()}; }
    void check_membership(double) const override {}
    TermInfo info() const override {
        return {family(), 1.0, {{"qprime0", qprime0_}}, xs_, qs_};
    }
    double last_value() const { return qs_.back(); }

private:
    // Second derivatives: clamped slope at the left end, natural at the right.
    void build_spline() {
        const std::size_t n = xs_.size();
        std::vector<double> sub(n, 0.0), diag(n, 0.0), sup(n, 0.0), rhs(n, 0.0);
        const double h0 = xs_[1] - xs_[0];
        diag[0] = h0 / 3.0;
        sup[0] = h0 / 6.0;
        rhs[0] = (qs_[1] - qs_[0]) / h0 - qprime0_;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double hl = xs_[i] - xs_[i - 1], hr = xs_[i + 1] - xs_[i];
            sub[i] = hl / 6.0;
            diag[i] = (hl + hr) / 3.0;
            sup[i] = hr / 6.0;
            rhs[i] = (qs_[i + 1] - qs_[i]) / hr - (qs_[i] - qs_[i - 1]) / hl;
        }
        diag[n - 1] = 1.0;
        rhs[n - 1] = 0.0;
        // Thomas algorithm.
        for (std::size_t i = 1; i < n; ++i) {
            const double w = sub[i] / diag[i - 1];
            diag[i] -= w * sup[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        m_.assign(n, 0.0);
        m_[n - 1] = rhs[n - 1] / diag[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) m_[i] = (rhs[i] - sup[i] * m_[i + 1]) / diag[i];
    }

    double segment_variation(double a, double b) const {
        if (b <= a) return 0.0;
        auto f = [this](double x) {
            const QValue v = eval(x);
            return std::abs(v.q) + std::abs(v.dq);
        };
        return num::integrate_gk(f, a, b, 1e-15, 1e-12).value;
    }

    void build_tail() {
        const std::size_t n = xs_.size();
        tail_from_knot_.assign(n, 0.0);
        for (std::size_t i = n - 1; i-- > 0;)
            tail_from_knot_[i] = tail_from_knot_[i + 1] + segment_variation(xs_[i], xs_[i + 1]);
    }

    std::vector<double> xs_, qs_;
    double qprime0_;
    std::vector<double> m_;
    std::vector<double> tail_from_knot_;
};

void check_r(double r) {
    if (!(std::isfinite(r) && r > 1.0)) throw InputError("weight exponent r must satisfy r > 1");
}

}  // namespace

Potential Potential::single(std::shared_ptr<const PotentialTerm> impl, double r) {
    check_r(r);
    impl->check_membership(r);
    Potential p;
    p.r_ = r;
    p.terms_.push_back({1.0, std::move(impl)});
    return p;
}

Potential Potential::zero(double r) {
    check_r(r);
    Potential p;
    p.r_ = r;
    return p;
}

Potential Potential::exp_decay(double c, double a, double r) {
    return single(std::make_shared<ExpDecay>(c, a), r);
}

Potential Potential::gaussian(double c, double center, double width, double r) {
    return single(std::make_shared<Gaussian>(c, center, width), r);
}

Potential Potential::compact_spline(double c, double center, double halfwidth, double r) {
    return single(std::make_shared<CompactSpline>(c, center, halfwidth), r);
}

Potential Potential::power_decay(double c, double s, double r) {
    return single(std::make_shared<PowerDecay>(c, s), r);
}

Potential Potential::tabulated(std::vector<double> xs, std::vector<double> qs, double qprime0,
                               double r) {
    auto impl = std::make_shared<Tabulated>(std::move(xs), std::move(qs), qprime0);
    const double last = impl->last_value();
    Potential p = single(impl, r);
    if (std::abs(last) > 1e-9) {
        std::ostringstream os;
        os << "tabulated: q(last knot) = " << last
           << " is not below 1e-9; zero extrapolation introduces a jump";
        p.warnings_.push_back(os.str());
    }
    return p;
}

QValue Potential::eval(double x) const {
    if (!(x >= 0.0)) throw InputError("potential: evaluation at x < 0 (or NaN)");
    QValue out;
    for (const auto& t : terms_) {
        const QValue v = t.impl->eval(x);
        out.q += t.scale * v.q;
        out.dq += t.scale * v.dq;
    }
    return out;
}

double Potential::q0() const { return eval(0.0).q; }

Potential Potential::with_r(double r) const {
    check_r(r);
    check_membership(r);
    Potential p = *this;
    p.r_ = r;
    return p;
}

double Potential::tail_bound(double X) const {
    double s = 0.0;
    for (const auto& t : terms_) s += std::abs(t.scale) * t.impl->tail_bound(X);
    return s;
}

double Potential::support_end() const {
    double end = 0.0;
    for (const auto& t : terms_) end = std::max(end, t.impl->support_end());
    return end;
}

std::vector<double> Potential::breakpoints() const {
    std::set<double> pts;
    for (const auto& t : terms_)
        for (double b : t.impl->breakpoints())
            if (b > 0.0 && std::isfinite(b)) pts.insert(b);
    return {pts.begin(), pts.end()};
}

std::optional<PotentialFamily> Potential::family() const {
    if (terms_.size() != 1) return std::nullopt;
    return terms_.front().impl->family();
}

std::vector<TermInfo> Potential::describe() const {
    std::vector<TermInfo> out;
    for (const auto& t : terms_) {
        TermInfo info = t.impl->info();
        info.scale = t.scale;
        out.push_back(std::move(info));
    }
    return out;
}

void Potential::check_membership(double r) const {
    for (const auto& t : terms_) t.impl->check_membership(r);
}

Potential Potential::operator+(const Potential& other) const {
    Potential p = *this;
    p.r_ = std::min(r_, other.r_);
    p.terms_.insert(p.terms_.end(), other.terms_.begin(), other.terms_.end());
    p.warnings_.insert(p.warnings_.end(), other.warnings_.begin(), other.warnings_.end());
    return p;
}

Potential Potential::operator*(double c) const {
    if (!std::isfinite(c)) throw InputError("potential: non-finite scale factor");
    Potential p = *this;
    if (c == 0.0) {
        p.terms_.clear();
        return p;
    }
    for (auto& t : p.terms_) t.scale *= c;
    return p;
}

namespace {

num::QuadResult weighted_square(const Potential& q, PotentialComponent component, double r) {
    auto f = [&](double x) {
        const QValue v = q.eval(x);
        const double g = component == PotentialComponent::Value ? v.q : v.dq;
        return g * g * std::pow(1.0 + x, r);
    };
    std::vector<double> bp = {0.0};
    for (double b : q.breakpoints()) bp.push_back(b);
    const double end = q.support_end();
    if (std::isfinite(end)) {
        bp.push_back(end);
        return num::integrate_gk(f, bp, 1e-300, 1e-12);
    }
    // Finite panels up to the last breakpoint, mapped tail beyond it.
    double total = 0.0, err = 0.0;
    bool ok = true;
    if (bp.size() > 1) {
        const auto head = num::integrate_gk(f, bp, 1e-300, 1e-12);
        total += head.value;
        err += head.error;
        ok = head.converged;
    }
    const auto tail = num::integrate_gk_semi_infinite(f, bp.back(), 1e-300, 1e-12);
    total += tail.value;
    err += tail.error;
    return {total, err, 0, ok && tail.converged};
}

}  // namespace

double norm_Ar(const Potential& q, PotentialComponent component, double r) {
    check_r(r);
    q.check_membership(r);
    if (q.is_zero()) return 0.0;
    const auto res = weighted_square(q, component, r);
    if (!res.converged && res.error > 1e-8 * std::abs(res.value)) {
        std::ostringstream os;
        os << "norm_Ar: quadrature of the weighted "
           << (component == PotentialComponent::Value ? "q^2" : "q'^2")
           << " moment did not converge (estimate " << res.value << ", error " << res.error << ")";
        throw NumericError(os.str());
    }
    return std::sqrt(res.value);
}

MembershipReport in_frakAr(const Potential& q) {
    MembershipReport m;
    m.norm_q = norm_Ar(q, PotentialComponent::Value, q.r());
    m.norm_dq = norm_Ar(q, PotentialComponent::Derivative, q.r());
    m.norm_frak = std::hypot(m.norm_q, m.norm_dq);
    return m;
}

double l1_norm(const Potential& q) {
    if (q.is_zero()) return 0.0;
    auto f = [&](double x) { return std::abs(q.eval(x).q); };
    std::vector<double> bp = {0.0};
    for (double b : q.breakpoints()) bp.push_back(b);
    double total = 0.0;
    if (bp.size() > 1) total += num::integrate_gk(f, bp, 1e-300, 1e-12).value;
    if (std::isfinite(q.support_end()) && q.support_end() <= bp.back()) return total;
    return total + num::integrate_gk_semi_infinite(f, bp.back(), 1e-300, 1e-12).value;
}

}  // namespace stark
