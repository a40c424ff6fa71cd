// qprobe — run a scenario, sweep one parameter, or run an oracle suite.
//
//   qprobe run <config> [--out <path>|-]
//   qprobe sweep <config> --axis lambda|delta_T|g|beta [--out <path>|-]
//   qprobe check fn|scaling|fidelity|tls|jc|decoherence|thermo|all
//
// Exit codes: 0 ok, 2 config/usage, 3 domain error, 4 resource cap.
// Data goes to --out (default stdout); metadata and warnings go to stderr.

#include "qprobe/checks.hpp"
#include "qprobe/errors.hpp"
#include "qprobe/pipeline.hpp"
#include "qprobe/scenario.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitDomain = 3;
constexpr int kExitResource = 4;

void emit(const std::string& data, const std::string& out) {
    if (out.empty() || out == "-") {
        std::cout << data;
        std::cout.flush();
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw qprobe::ConfigError("--out: cannot open '" + out + "' for writing");
    f << data;
    if (!f) throw qprobe::ConfigError("--out: write to '" + out + "' failed");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Thermodynamic witnesses of quantum probing"};
    app.require_subcommand(1);

    std::string config, out, axis, suite;

    auto* run = app.add_subcommand("run", "Analyze one scenario");
    run->add_option("config", config, "Scenario file")->required();
    run->add_option("--out", out, "Output path, '-' for stdout");

    auto* sweep = app.add_subcommand("sweep", "Sweep one parameter and write CSV");
    sweep->add_option("config", config, "Scenario file")->required();
    sweep->add_option("--axis", axis, "lambda, delta_T, g or beta")->required();
    sweep->add_option("--out", out, "Output path, '-' for stdout");

    auto* check = app.add_subcommand("check", "Run an oracle suite");
    check->add_option("suite", suite, "fn, scaling, fidelity, tls, jc, decoherence, thermo or all")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*run) {
            const auto s = qprobe::load_scenario(config);
            const auto report = qprobe::analyze(s);
            if (!report.truncation.converged) {
                std::cerr << "warning: apparatus partition function changes by " << qprobe::format_real(report.truncation.max_change)
                          << " when n_trunc is doubled\n";
            }
            if (!report.analysis.beta_eff) std::cerr << "note: beta(n) is not flat within analysis.beta_eff_tol; no beta_eff\n";
            emit(qprobe::format_report(report), out);
        } else if (*sweep) {
            const auto a = qprobe::parse_axis(axis);
            const auto s = qprobe::load_scenario(config);
            emit(qprobe::sweep_csv(s, a), out);
            std::cerr << "sweep: axis " << axis << " written to " << (out.empty() || out == "-" ? "stdout" : out) << '\n';
        } else if (*check) {
            const auto report = qprobe::run_check(suite);
            std::cout << report.format();
            return report.passed() ? 0 : 1;
        }
    } catch (const qprobe::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const qprobe::ResourceError& e) {
        std::cerr << "resource error: " << e.what() << '\n';
        return kExitResource;
    } catch (const qprobe::DomainError& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const qprobe::DimensionError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    return 0;
}
