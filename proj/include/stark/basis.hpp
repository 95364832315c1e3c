#pragma once

// Unperturbed solutions of -f'' + x f = z f on the half-line:
//   psi0 = sqrt(pi) Ai(x - z), theta0 = sqrt(pi) Bi(x - z),
//   s0 = -theta0(z,0) psi0 + psi0(z,0) theta0,
//   c0 = theta0'(z,0) psi0 - psi0'(z,0) theta0,
//   phi0 = c0 + b s0.

#include <optional>

namespace stark {

struct BasisSample {
    double z = 0.0;
    double x = 0.0;
    double psi0 = 0.0, psi0_prime = 0.0;
    double theta0 = 0.0, theta0_prime = 0.0;
    double s0 = 0.0, s0_prime = 0.0;
    double c0 = 0.0, c0_prime = 0.0;
    std::optional<double> b;
    std::optional<double> phi0, phi0_prime;
};

/// Requires x - z and -z inside the unscaled Airy range.
BasisSample basis_eval(double z, double x, std::optional<double> b = std::nullopt);

/// z-derivatives from the closed identities (no differencing).
struct BasisZDeriv {
    double psi0_dot = 0.0, theta0_dot = 0.0;
    double s0_dot = 0.0, c0_dot = 0.0;
    double s0_dot_prime = 0.0, c0_dot_prime = 0.0;
};

BasisZDeriv basis_zderiv(double z, double x);
BasisZDeriv basis_zderiv(const BasisSample& s);

/// The eight envelope inequalities for psi0, theta0, s0, c0 and their
/// x-derivatives, each written |f| <= K * envelope.
enum class BasisBound {
    Psi0,
    Psi0Prime,
    Theta0,
    Theta0Prime,
    S0,
    S0Prime,
    C0,
    C0Prime,
};

inline constexpr BasisBound kAllBasisBounds[] = {
    BasisBound::Psi0, BasisBound::Psi0Prime, BasisBound::Theta0, BasisBound::Theta0Prime,
    BasisBound::S0,   BasisBound::S0Prime,   BasisBound::C0,     BasisBound::C0Prime,
};

const char* to_string(BasisBound bound);

/// |f| / envelope, computed in log space so large z stays finite.
double basis_bound_ratio(BasisBound bound, const BasisSample& s);

}  // namespace stark
