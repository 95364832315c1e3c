#pragma once

// Campaign orchestration: tables (zeros, unperturbed, spectrum) and
// verification reports with a log-log slope check. Per-n work runs on a
// small thread pool and is merged by index, so output does not depend on
// the thread count.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "stark/airy.hpp"
#include "stark/audits.hpp"
#include "stark/potential.hpp"
#include "stark/shoot.hpp"

namespace stark {

/// A potential together with the TOML text it was built from, so reports can
/// carry a reproducible description.
struct PotentialSpec {
    std::string toml;
    std::string label;

    Potential build() const;
    static PotentialSpec from_file(const std::string& path);
    /// zero, exp1, exp2, gauss, bump, power.
    static PotentialSpec builtin(const std::string& name);
};

/// "A..B" or "n1,n2,...". Throws InputError.
std::vector<long> parse_n_list(const std::string& text);

struct ReportRow {
    long n = 0;
    double numeric = 0.0;
    double predicted = 0.0;
    double residual = 0.0;
    bool sane = true;
};

struct VerificationReport {
    std::string campaign;
    nlohmann::json config_echo;
    std::vector<ReportRow> rows;
    std::optional<double> fitted_slope;
    std::pair<double, double> expected_slope_interval{0.0, 0.0};
    bool passed = false;
    std::int64_t runtime_ms = 0;
    /// Human-readable reasons for failure and notes.
    std::vector<std::string> messages;
    std::vector<AuditResult> audits;

    nlohmann::json to_json() const;
};

struct CampaignConfig {
    std::string campaign;
    PotentialSpec potential = PotentialSpec::builtin("zero");
    std::optional<PotentialSpec> direction;
    double b = 0.0;
    std::vector<long> ns;
    std::optional<double> r;
    SolverConfig solver;
    int threads = 1;

    nlohmann::json echo() const;
    /// Inverse of echo(); threads is not part of the echo.
    static CampaignConfig from_echo(const nlohmann::json& echo);
};

inline const std::vector<std::string>& campaign_names() {
    static const std::vector<std::string> names = {
        "unperturbed-eig", "unperturbed-kappa", "eig", "kappa", "denominator", "gradient", "envelope"};
    return names;
}

/// Expected slope interval for slope-fitted campaigns.
std::optional<std::pair<double, double>> expected_interval(const std::string& campaign);

/// Factor by which a residual magnitude may exceed the smallest earlier one.
inline constexpr double kMonotoneJitter = 3.0;

/// Throws InputError on bad configuration and NumericError subclasses on
/// solver failure (the message names the failing n).
VerificationReport cmd_verify(const CampaignConfig& cfg);

/// Envelope audit against `baselines`; with freeze the measurement is saved
/// to `freeze_path` first and the comparison is against the new values.
VerificationReport cmd_envelope(const CampaignConfig& cfg, const Baselines& baselines,
                                const std::optional<std::string>& freeze_path);

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    nlohmann::json config_echo;

    std::string to_csv() const;
    nlohmann::json to_json() const;
};

Table cmd_zeros(long count, AiryZeroKind kind);
Table cmd_unperturbed(double b, const std::vector<long>& ns, int threads);
Table cmd_spectrum(const CampaignConfig& cfg);

/// Runs fn(i) for i in [0, count) on `threads` workers and returns the
/// results in index order. The exception of the lowest failing index is
/// rethrown after all workers finish.
template <class T>
std::vector<T> parallel_map(std::size_t count, int threads, const std::function<T(std::size_t)>& fn);

/// `%.17g` with "nan"/"inf" spelled out.
std::string format_double(double v);

/// Writes `text` to path, or stdout when path is empty or "-".
void write_output(const std::string& path, const std::string& text);

}  // namespace stark

#include "stark/detail/parallel_map.hpp"
