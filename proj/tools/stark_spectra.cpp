// stark-spectra: command-line front end for the spectral solver and the
// verification campaigns.
//
// Exit codes: 0 pass, 1 verification failed, 2 usage or input error,
// 3 numeric failure.

#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "stark/errors.hpp"
#include "stark/harness.hpp"

namespace {

enum Exit { kPass = 0, kFail = 1, kUsage = 2, kNumeric = 3 };

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void emit_table(const stark::Table& t, const std::string& out) {
    if (ends_with(out, ".json"))
        stark::write_output(out, t.to_json().dump(2) + "\n");
    else
        stark::write_output(out, t.to_csv());
}

void emit_report(const stark::VerificationReport& r, const std::string& out) {
    if (ends_with(out, ".csv")) {
        std::string text = "n,numeric,predicted,residual\n";
        for (const auto& row : r.rows)
            text += std::to_string(row.n) + "," + stark::format_double(row.numeric) + "," +
                    stark::format_double(row.predicted) + "," + stark::format_double(row.residual) + "\n";
        stark::write_output(out, text);
    } else {
        stark::write_output(out, r.to_json().dump(2) + "\n");
    }
    std::cerr << r.campaign << ": " << (r.passed ? "passed" : "FAILED");
    if (r.fitted_slope) std::cerr << " (slope " << *r.fitted_slope << ")";
    std::cerr << "\n";
    for (const auto& m : r.messages) std::cerr << "  " << m << "\n";
}

struct PotentialFlags {
    std::string file;
    std::string builtin;

    stark::PotentialSpec resolve(const std::string& fallback) const {
        if (!file.empty() && !builtin.empty()) throw stark::InputError("give a potential file or a builtin, not both");
        if (!file.empty()) return stark::PotentialSpec::from_file(file);
        return stark::PotentialSpec::builtin(builtin.empty() ? fallback : builtin);
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral data of half-line Stark operators"};
    app.require_subcommand(1);

    std::string out;
    std::string n_text;
    double b = 0.0;
    double r = 0.0;
    int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    PotentialFlags pot, dir;
    stark::SolverConfig solver;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", out, "Output file (.csv or .json); stdout when omitted");
        sub->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1, 1024));
    };
    auto add_potential = [&](CLI::App* sub) {
        sub->add_option("--potential", pot.file, "Potential spec file (TOML)");
        sub->add_option("--builtin", pot.builtin, "Builtin potential: zero, exp1, exp2, gauss, bump, power");
        sub->add_option("--r", r, "Weight exponent r > 1 (overrides the spec)");
        sub->add_option("--rtol", solver.rtol, "ODE relative tolerance");
        sub->add_option("--x-margin", solver.X_margin, "Truncation margin beyond the turning point");
    };

    auto* zeros = app.add_subcommand("zeros", "Airy zeros with McMahon guesses");
    std::string kind = "ai-prime";
    long count = 10;
    zeros->add_option("--kind", kind)->check(CLI::IsMember({"ai", "ai-prime"}));
    zeros->add_option("--count", count);
    add_common(zeros);

    auto* unpert = app.add_subcommand("unperturbed", "Exact spectral data for q = 0");
    unpert->add_option("--b", b, "Robin parameter");
    unpert->add_option("--n", n_text, "Indices A..B or a comma list")->required();
    add_common(unpert);

    auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues and norming constants");
    spectrum->add_option("--b", b, "Robin parameter");
    spectrum->add_option("--n", n_text, "Indices A..B or a comma list")->required();
    add_potential(spectrum);
    add_common(spectrum);

    auto* verify = app.add_subcommand("verify", "Run a verification campaign");
    std::string campaign;
    std::string replay;
    verify->add_option("campaign", campaign, "Campaign name")->check(CLI::IsMember(stark::campaign_names()));
    verify->add_option("--b", b, "Robin parameter");
    verify->add_option("--n", n_text, "Indices A..B or a comma list");
    verify->add_option("--direction", dir.file, "Direction potential file (gradient)");
    verify->add_option("--direction-builtin", dir.builtin, "Builtin direction potential (gradient)");
    verify->add_option("--replay", replay, "Re-run from the config_echo of a JSON report");
    add_potential(verify);
    add_common(verify);

    auto* envelope = app.add_subcommand("envelope-audit", "Envelope inequality regressions");
    bool do_freeze = false;
    envelope->add_flag("--freeze", do_freeze, "Overwrite the frozen baselines with this measurement");
    add_common(envelope);

    auto* gradient = app.add_subcommand("gradient-audit", "Directional derivative of eigenvalues, two ways");
    gradient->add_option("--b", b, "Robin parameter");
    gradient->add_option("--n", n_text, "Indices (default 1,3,10)");
    gradient->add_option("--direction", dir.file, "Direction potential file");
    gradient->add_option("--direction-builtin", dir.builtin, "Builtin direction potential");
    add_potential(gradient);
    add_common(gradient);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    auto make_config = [&](const std::string& name, const std::string& default_n) {
        stark::CampaignConfig cfg;
        cfg.campaign = name;
        cfg.potential = pot.resolve("zero");
        cfg.b = b;
        cfg.ns = stark::parse_n_list(n_text.empty() ? default_n : n_text);
        if (r != 0.0) cfg.r = r;
        cfg.solver = solver;
        cfg.threads = threads;
        if (!dir.file.empty() || !dir.builtin.empty()) cfg.direction = dir.resolve("zero");
        return cfg;
    };

    try {
        if (*zeros) {
            emit_table(stark::cmd_zeros(count, kind == "ai" ? stark::AiryZeroKind::Ai : stark::AiryZeroKind::AiPrime), out);
            return kPass;
        }
        if (*unpert) {
            emit_table(stark::cmd_unperturbed(b, stark::parse_n_list(n_text), threads), out);
            return kPass;
        }
        if (*spectrum) {
            emit_table(stark::cmd_spectrum(make_config("spectrum", "")), out);
            return kPass;
        }
        if (*envelope) {
            const std::string path = stark::baselines_path();
            stark::CampaignConfig cfg;
            cfg.campaign = "envelope";
            cfg.ns = {};
            const auto rep = stark::cmd_envelope(cfg, stark::Baselines::load(path),
                                                 do_freeze ? std::optional<std::string>(path) : std::nullopt);
            emit_report(rep, out);
            return rep.passed ? kPass : kFail;
        }
        stark::CampaignConfig cfg;
        if (*gradient) {
            cfg = make_config("gradient", "1,3,10");
        } else if (!replay.empty()) {
            std::ifstream in(replay);
            if (!in) throw stark::InputError("cannot open " + replay);
            nlohmann::json report;
            try {
                report = nlohmann::json::parse(in);
            } catch (const nlohmann::json::exception& e) {
                throw stark::InputError(std::string("malformed report: ") + e.what());
            }
            if (!report.contains("config_echo")) throw stark::InputError("report has no config_echo");
            cfg = stark::CampaignConfig::from_echo(report["config_echo"]);
            cfg.threads = threads;
        } else {
            if (campaign.empty()) throw stark::InputError("verify needs a campaign name");
            cfg = make_config(campaign, campaign == "gradient" ? "1,3,10" : "5..60");
        }
        const auto rep = stark::cmd_verify(cfg);
        emit_report(rep, out);
        return rep.passed ? kPass : kFail;
    } catch (const stark::NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kNumeric;
    } catch (const stark::ParseError& e) {
        std::cerr << "input error: " << e.what() << " (line " << e.line() << ", field " << e.field() << ")\n";
        return kUsage;
    } catch (const stark::Error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kUsage;
    }
}
