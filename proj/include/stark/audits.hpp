#pragma once

// Envelope audits: each inequality |f| <= K * envelope (or the
// K w e^{K w} * envelope form) is turned into a measured smallest K over a
// fixed grid. Frozen values live in the baselines file; an audit passes when
// the measurement does not exceed its frozen value.

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stark/baselines.hpp"
#include "stark/potential.hpp"

namespace stark {

struct AuditResult {
    std::string name;
    std::string description;
    double measured = 0.0;
    std::optional<double> baseline;
    bool passed = false;
    long samples = 0;
};

/// Smallest K with R <= K w exp(K w): W0(R w) / w. R when w == 0 is only
/// allowed to be 0.
double lambert_constant(double ratio, double w);

/// The potentials the audits sweep over.
std::vector<std::pair<std::string, Potential>> builtin_potentials();

struct AuditOptions {
    int basis_z_points = 120;
    int basis_x_points = 200;
    long rate_n_max = 60;
};

std::vector<AuditResult> audit_basis(const AuditOptions& opt = {});
std::vector<AuditResult> audit_weights(const AuditOptions& opt = {});
/// c0_sq is the square of the shared envelope constant used in the term
/// bounds (taken from the basis audit).
std::vector<AuditResult> audit_volterra(double c0_sq, const AuditOptions& opt = {});
std::vector<AuditResult> audit_shoot(const AuditOptions& opt = {});

/// Runs every audit; `progress` (if set) receives each audit name as it finishes.
std::vector<AuditResult> measure_envelope_audits(
    const AuditOptions& opt = {}, const std::function<void(const AuditResult&)>& progress = {});

/// Fills baseline and passed. Missing baselines fail.
void compare_with_baselines(std::vector<AuditResult>& results, const Baselines& b);

/// measured * kBaselineHeadroom for each audit.
Baselines freeze(const std::vector<AuditResult>& results);

/// Ratio used by the denominator campaign and its audit:
/// | ||psi_n||^2 / (3 pi n / 2)^{1/3} - 1 | * n^{1/3}.
double denominator_ratio(long n, double norm_sq);

inline constexpr const char* kDenominatorBaseline = "shoot.denominator";

}  // namespace stark
