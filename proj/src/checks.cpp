#include "qprobe/checks.hpp"

#include "qprobe/errors.hpp"
#include "qprobe/fn_transform.hpp"
#include "qprobe/models.hpp"
#include "qprobe/oracle.hpp"
#include "qprobe/probe_dynamics.hpp"
#include "qprobe/scenario.hpp"
#include "qprobe/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <sstream>

namespace qprobe {

namespace {

CheckLine line(std::string name, bool ok, std::string detail) { return {std::move(name), ok, false, std::move(detail)}; }

double max_eigen_error(const Matrix& H0, const Matrix& V) {
    const auto sol = solve_generator(H0, V);
    const RealVector a = eig_hermitian(effective_hamiltonian(H0, V, sol)).eigenvalues;
    const RealVector b = eig_hermitian(H0 + V).eigenvalues;
    return (a - b).cwiseAbs().maxCoeff();
}

void scaling_suite(std::vector<CheckLine>& out) {
    const std::vector<double> scales{0.1, 0.05, 0.025};
    double worst = std::numeric_limits<double>::infinity();
    std::uint64_t worst_seed = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto inst = random_fn_instance(6, seed);
        std::vector<double> errs;
        for (double sc : scales) errs.push_back(max_eigen_error(inst.H0, sc * inst.V_unit));
        const double p = scaling_exponent(scales, errs, 1.0).fitted_exponent;
        if (p < worst) worst = p, worst_seed = seed;
    }
    std::ostringstream d;
    d << "min fitted exponent over 20 random 6x6 instances = " << worst << " (seed " << worst_seed << ", limit 2.7)";
    out.push_back(line("scaling.second_order_exponent", worst >= 2.7, d.str()));
}

void fn_suite(std::vector<CheckLine>& out) {
    double worst_residual = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto inst = random_fn_instance(6, seed);
        const Matrix V = 0.1 * inst.V_unit;
        worst_residual = std::max(worst_residual, solve_generator(inst.H0, V).residual / V.norm());
    }
    std::ostringstream d1;
    d1 << "max |V + [H0,S]|_F / |V|_F over 20 random instances = " << worst_residual << " (limit 1e-10)";
    out.push_back(line("fn.generator_residual", worst_residual <= 1e-10, d1.str()));

    // 2x2 analytic case: |eig(H_eff) - eig(H0+V)| <= 2 g^4/Δ^3 for g/Δ <= 0.2.
    double worst_ratio = 0.0;
    const double delta = 1.0;
    for (double g : {0.2, 0.1, 0.05}) {
        Matrix H0 = Matrix::Zero(2, 2);
        H0(1, 1) = delta;
        Matrix V = Matrix::Zero(2, 2);
        V(0, 1) = V(1, 0) = g;
        worst_ratio = std::max(worst_ratio, max_eigen_error(H0, V) / (2.0 * std::pow(g, 4) / std::pow(delta, 3)));
    }
    std::ostringstream d3;
    d3 << "max error / (2 g^4/Delta^3) = " << worst_ratio;
    out.push_back(line("fn.two_level_bound", worst_ratio <= 1.0, d3.str()));

    // Non-demolition structure of the dephasing model after the transform.
    SystemSpec sys{SystemKind::truncated_oscillator, 1.0, 1.0, 4};
    ApparatusSpec app{ApparatusKind::boson_bath, {{1.3, cplx(0.1, 0.0), 8}, {2.1, cplx(0.05, 0.02), 8}}};
    CouplingSpec cpl{};
    const auto ops = build_total_hamiltonian(sys, app, cpl);
    const Matrix H0 = ops.H_S + ops.H_A;
    const Matrix V_eff = effective_hamiltonian(H0, ops.V_AS, solve_generator(H0, ops.V_AS)) - H0;
    const double nd = nondemolition_residual(ops.H_S, V_eff);
    std::ostringstream d4;
    d4 << "|[H_S, V_eff]|_F = " << nd << " (limit 1e-10)";
    out.push_back(line("fn.nondemolition", nd <= 1e-10, d4.str()));

    const auto bd = branch_decompose(ops.V_AS + V_eff, ops.space);
    const double lossless = (branch_reassemble(bd, ops.space) - (ops.V_AS + V_eff)).norm() - bd.offdiag_leakage;
    std::ostringstream d5;
    d5 << "| |X - sum_n |n><n| H(n)|_F - leakage | = " << std::abs(lossless);
    out.push_back(line("fn.branch_reconstruction", std::abs(lossless) <= 1e-12 * std::max(1.0, bd.offdiag_leakage), d5.str()));
}

void fidelity_suite(std::vector<CheckLine>& out) {
    double worst = 0.0;
    for (int i = 0; i <= 9; ++i) {
        const double lambda = 0.1 * i;
        worst = std::max(worst, std::abs(fidelity_oscillator_series(1.0, 1.0, lambda) - fidelity_oscillator_closed_form(1.0, 1.0, lambda)));
    }
    std::ostringstream d1, d2;
    d1 << "max |F_series - F_closed| over lambda in {0,...,0.9} = " << worst << " (limit 1e-9)";
    out.push_back(line("fidelity.series_vs_closed", worst <= 1e-9, d1.str()));
    const double f0 = fidelity_oscillator_closed_form(1.0, 1.0, 0.0);
    d2 << "F(lambda=0) = " << format_real(f0);
    out.push_back(line("fidelity.identity", std::abs(f0 - 1.0) <= 1e-12, d2.str()));
}

void tls_suite(std::vector<CheckLine>& out) {
    const auto r = tls_analysis(10.0, cplx(0.5, 0.0), 1.0, 1.0);
    const double chi = 0.25 / 9.0;
    const double xi_g = 1.0 / (-std::expm1(-(10.0 + chi)));
    const double xi_e = std::exp(-chi) * xi_g;
    const double beta_eff_geo = 1.0 + std::log(xi_g / xi_e);
    std::ostringstream d1, d2;
    d1 << "beta_eff = " << format_real(r.beta_eff) << ", geometric oracle " << format_real(beta_eff_geo)
       << ", 1 + 1/36 = " << format_real(1.0 + 1.0 / 36.0);
    out.push_back(line("tls.beta_eff", std::abs(r.beta_eff - beta_eff_geo) <= 1e-12 && std::abs(r.beta_eff - (1.0 + 1.0 / 36.0)) <= 1e-12, d1.str()));
    d2 << "delta_T = " << format_real(r.delta_T) << ", xi_g - xi_e = " << format_real(r.xi_g - r.xi_e);
    out.push_back(line("tls.cooling", r.delta_T > 0.0 && r.xi_g > r.xi_e, d2.str()));
}

void jc_suite(std::vector<CheckLine>& out) {
    const auto c = dispersive_jc_diagnostic(10.0, cplx(0.5, 0.0), 1.0, 1.0, 40);
    std::ostringstream d;
    d << "beta_eff printed-series " << format_real(c.series_beta_eff) << ", geometric " << format_real(c.geometric_beta_eff)
      << ", exact JC " << format_real(c.exact_beta_eff) << "; xi deviations series/geometric " << c.series_vs_geometric
      << ", series/exact " << c.series_vs_exact;
    out.push_back({"jc.dispersive_vs_exact", true, true, d.str()});
}

void decoherence_suite(std::vector<CheckLine>& out) {
    const double omega = 1.0, g = 0.4;
    const std::size_t n = 30;
    const std::vector<std::size_t> dims{n};
    const Matrix b = annihilation(n);
    const Matrix h_a = omega * number_operator(n);
    BranchDecomposition br;
    br.branch_hamiltonians = {Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)), Matrix(g * (b + b.adjoint()))};
    std::vector<double> times;
    for (int i = 0; i <= 200; ++i) times.push_back(2.0 * std::numbers::pi / omega * i / 200.0);
    const auto rec = decoherence_matrix(br, h_a, fock_vacuum(dims), times);
    double worst = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double exact = std::exp(-(g * g / (omega * omega)) * (1.0 - std::cos(omega * times[i])));
        worst = std::max(worst, std::abs(rec.magnitude(0, 1, i) - exact));
    }
    std::ostringstream d;
    d << "max deviation from displaced-oscillator overlap over one period = " << worst << " (limit 1e-8)";
    out.push_back(line("decoherence.single_mode", worst <= 1e-8, d.str()));
}

void thermo_suite(std::vector<CheckLine>& out) {
    const SystemSpec sys{SystemKind::truncated_oscillator, 1.0, 1.0, 4};
    const CouplingSpec cpl{};
    std::vector<double> devs;
    for (double g : {0.1, 0.05}) {
        const ApparatusSpec app{ApparatusKind::boson_bath, {{1.3, cplx(g, 0.0), 10}, {2.1, cplx(g, 0.0), 10}}};
        const auto ops = build_total_hamiltonian(sys, app, cpl);
        const auto ref = exact_reference_state(ops.H_S, ops.H_A, ops.V_AS, 1.0, ops.space);
        const double target = 1.0 * (1.0 - self_energy(app) / sys.omega);
        double dev = 0.0;
        for (double b : ref.beta_profile) dev = std::max(dev, std::abs(b - target));
        devs.push_back(dev);
    }
    std::ostringstream d1, d2;
    d1 << "max |beta(n)_exact - beta(1 - eps/omega)| at g = 0.05: " << devs[1] << " (limit 1e-3)";
    d2 << "deviation ratio g=0.1 / g=0.05 = " << devs[0] / devs[1] << " (limit 3)";
    out.push_back(line("thermo.closed_form_deviation", devs[1] <= 1e-3, d1.str()));
    out.push_back(line("thermo.perturbative_scaling", devs[0] / devs[1] >= 3.0, d2.str()));
}

} // namespace

bool CheckReport::passed() const {
    return std::all_of(lines.begin(), lines.end(), [](const CheckLine& l) { return l.informational || l.passed; });
}

std::string CheckReport::format() const {
    std::ostringstream out;
    for (const auto& l : lines) out << (l.informational ? "INFO " : (l.passed ? "PASS " : "FAIL ")) << l.name << ": " << l.detail << '\n';
    out << (passed() ? "result: pass" : "result: fail") << '\n';
    return out.str();
}

std::vector<std::string> check_suite_names() { return {"fn", "scaling", "fidelity", "tls", "jc", "decoherence", "thermo", "all"}; }

CheckReport run_check(const std::string& suite) {
    CheckReport r;
    const bool all = suite == "all";
    bool known = all;
    auto run = [&](const char* name, void (*fn)(std::vector<CheckLine>&)) {
        if (all || suite == name) {
            known = true;
            fn(r.lines);
        }
    };
    run("fn", fn_suite);
    run("scaling", scaling_suite);
    run("fidelity", fidelity_suite);
    run("tls", tls_suite);
    run("jc", jc_suite);
    run("decoherence", decoherence_suite);
    run("thermo", thermo_suite);
    if (!known) throw ConfigError("check: unknown suite '" + suite + "'");
    return r;
}

} // namespace qprobe
