#include "qprobe/pipeline.hpp"

#include "qprobe/errors.hpp"
#include "qprobe/fn_transform.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <sstream>
#include <thread>

namespace qprobe {

namespace {

std::string join(const std::vector<double>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ", ";
        out += format_real(xs[i]);
    }
    return out;
}

std::string opt(const std::optional<double>& x) { return x ? format_real(*x) : "none"; }
std::string csv_opt(const std::optional<double>& x) { return x ? format_real(*x) : ""; }

// Evaluates row(i) for every grid index, possibly concurrently, and returns
// the rows in index order.
std::vector<std::string> ordered_rows(std::size_t count, const std::function<std::string(std::size_t)>& row) {
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), count));
    std::vector<std::string> rows(count);
    std::vector<std::future<void>> jobs;
    for (std::size_t w = 0; w < workers; ++w) {
        jobs.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = w; i < count; i += workers) rows[i] = row(i);
        }));
    }
    for (auto& j : jobs) j.get();
    return rows;
}

} // namespace

RunReport analyze(const Scenario& s) {
    validate(s.system, s.apparatus, s.coupling);
    if (!(s.beta > 0.0)) throw ConfigError("beta: inverse temperature must be > 0");

    RunReport r;
    ThermalAnalysis& th = r.analysis;
    th.beta = s.beta;
    r.energies = system_energies(s.system);
    r.self_energy = self_energy(s.apparatus);
    r.truncation = truncation_gate(s.apparatus, s.beta);

    const auto padded = build_total_hamiltonian(s.system, s.apparatus, s.coupling, s.analysis.max_dim, s.analysis.fock_padding);
    const ProductSpace target(s.system.dim(), s.apparatus.dims());
    const Matrix H0 = padded.H_S + padded.H_A;
    const auto sol = solve_generator(H0, padded.V_AS, s.analysis.degeneracy_tol);
    r.generator_residual = sol.residual;
    const Matrix H_eff = restrict_apparatus(effective_hamiltonian(H0, padded.V_AS, sol), padded.space, target);
    const Matrix H_S = restrict_apparatus(padded.H_S, padded.space, target);
    const Matrix H_A = restrict_apparatus(padded.H_A, padded.space, target);
    const Matrix V_eff = H_eff - H_S - H_A;
    r.offdiag_leakage = branch_decompose(V_eff, target).offdiag_leakage;
    r.nondemolition_residual = nondemolition_residual(H_S, V_eff);

    if (s.analysis.density_band) {
        r.density = spectral_density_check(padded.h_system, system_block(H_A, target, 0, 0), *s.analysis.density_band,
                                           *s.analysis.density_ratio);
    }

    if (s.coupling.kind == CouplingKind::dipole && s.coupling.rotating_wave) {
        const auto& cav = s.apparatus.modes.front();
        r.tls = tls_analysis(cav.omega, cav.g, s.system.delta, s.beta, s.analysis.tls_max_terms);
        th.xi = {r.tls->xi_g, r.tls->xi_e};
    } else {
        th.xi = formal_factors(H_A, V_eff, s.beta, target);
    }

    th.beta_profile = generalized_beta_profile(th.xi, r.energies, s.beta);
    th.beta_eff = effective_beta(th.beta_profile, s.analysis.beta_eff_tol);
    th.level_shifts = level_shifts_from_xi(th.xi, s.beta);
    const Matrix rho_S = modified_thermal_state(r.energies, th.xi, s.beta);
    th.delta_U = inner_energy_change(rho_S, s.beta, padded.h_system);
    if (s.analysis.delta_u_unnormalized && th.beta_eff) {
        th.delta_U_unnormalized = inner_energy_change_unnormalized(r.energies, s.beta, *th.beta_eff);
    }
    if (s.system.kind == SystemKind::two_level) {
        th.delta_T = r.tls ? r.tls->delta_T : tls_temperature_decrease(th.xi[0], th.xi[1], s.system.delta, s.beta);
    }
    th.fidelity = fidelity_general(s.beta, r.energies, th.xi);
    return r;
}

std::string format_report(const RunReport& r) {
    const auto& th = r.analysis;
    std::vector<double> energies(r.energies.data(), r.energies.data() + r.energies.size());
    std::ostringstream out;
    out << "beta = " << format_real(th.beta) << '\n';
    out << "levels = " << energies.size() << '\n';
    out << "energies = " << join(energies) << '\n';
    out << "self_energy = " << format_real(r.self_energy) << '\n';
    out << "xi = " << join(th.xi) << '\n';
    out << "beta_profile = " << join(th.beta_profile) << '\n';
    out << "beta_eff = " << opt(th.beta_eff) << '\n';
    out << "level_shifts = " << join(th.level_shifts) << '\n';
    out << "delta_U = " << format_real(th.delta_U) << '\n';
    if (th.delta_U_unnormalized) out << "delta_U_unnormalized = " << format_real(*th.delta_U_unnormalized) << '\n';
    out << "delta_T = " << opt(th.delta_T) << '\n';
    out << "fidelity = " << format_real(th.fidelity) << '\n';
    out << "generator_residual = " << format_real(r.generator_residual) << '\n';
    out << "offdiag_leakage = " << format_real(r.offdiag_leakage) << '\n';
    out << "nondemolition_residual = " << format_real(r.nondemolition_residual) << '\n';
    out << "truncation_partition_function = " << format_real(r.truncation.partition_function) << '\n';
    out << "truncation_max_change = " << format_real(r.truncation.max_change) << '\n';
    out << "truncation_converged = " << (r.truncation.converged ? "true" : "false") << '\n';
    if (r.density) {
        out << "density_min_system_gap = " << format_real(r.density->min_system_gap) << '\n';
        out << "density_max_apparatus_gap = " << format_real(r.density->max_apparatus_gap) << '\n';
        out << "density_ratio = " << format_real(r.density->ratio) << '\n';
        out << "density_degenerate = " << (r.density->degenerate_system ? "true" : "false") << '\n';
        out << "density_passed = " << (r.density->passed ? "true" : "false") << '\n';
    }
    if (r.tls) {
        out << "tls_chi = " << format_real(r.tls->chi) << '\n';
        out << "tls_terms = " << r.tls->terms << '\n';
        out << "tls_weak_detuning = " << (r.tls->weak_detuning ? "true" : "false") << '\n';
    }
    return out.str();
}

SweepAxis parse_axis(const std::string& name) {
    if (name == "lambda") return SweepAxis::lambda;
    if (name == "delta_T") return SweepAxis::delta_T;
    if (name == "g") return SweepAxis::g;
    if (name == "beta") return SweepAxis::beta;
    throw ConfigError("--axis: expected lambda, delta_T, g or beta, got '" + name + "'");
}

std::string sweep_csv(const Scenario& s, SweepAxis axis) {
    std::ostringstream out;
    std::vector<std::string> rows;

    if (axis == SweepAxis::lambda || axis == SweepAxis::delta_T) {
        if (s.system.kind != SystemKind::truncated_oscillator) throw ConfigError("--axis: lambda/delta_T sweeps need system.kind = truncated_oscillator");
        if (!s.sweep.lambda) throw ConfigError("sweep.lambda: required for this axis");
        const auto& grid = *s.sweep.lambda;
        const double beta = s.beta, omega = s.system.omega;
        if (axis == SweepAxis::lambda) {
            out << "axis_value,fidelity_closed,fidelity_series,abs_err\n";
            rows = ordered_rows(grid.size(), [&](std::size_t i) {
                const double fc = fidelity_oscillator_closed_form(beta, omega, grid[i]);
                const double fs = fidelity_oscillator_series(beta, omega, grid[i]);
                return format_real(grid[i]) + "," + format_real(fc) + "," + format_real(fs) + "," + format_real(std::abs(fc - fs));
            });
        } else {
            out << "delta_T,fidelity\n";
            rows = ordered_rows(grid.size(), [&](std::size_t i) {
                return format_real(temperature_shift_oscillator(beta, omega, grid[i])) + "," +
                       format_real(fidelity_oscillator_closed_form(beta, omega, grid[i]));
            });
        }
    } else {
        const bool is_g = axis == SweepAxis::g;
        const auto& grid_opt = is_g ? s.sweep.g : s.sweep.beta;
        if (!grid_opt) throw ConfigError(std::string(is_g ? "sweep.g" : "sweep.beta") + ": required for this axis");
        if (is_g && s.apparatus.modes.empty()) throw ConfigError("--axis: g sweep needs at least one apparatus mode");
        const auto& grid = *grid_opt;
        out << (is_g ? "g" : "beta") << ",beta_eff,delta_U,delta_T,fidelity\n";
        rows = ordered_rows(grid.size(), [&](std::size_t i) {
            Scenario point = s;
            if (is_g) {
                for (auto& m : point.apparatus.modes) m.g = cplx(grid[i], 0.0);
            } else {
                point.beta = grid[i];
            }
            const auto th = analyze(point).analysis;
            return format_real(grid[i]) + "," + csv_opt(th.beta_eff) + "," + format_real(th.delta_U) + "," + csv_opt(th.delta_T) + "," +
                   format_real(th.fidelity);
        });
    }
    for (const auto& row : rows) out << row << '\n';
    return out.str();
}

} // namespace qprobe
