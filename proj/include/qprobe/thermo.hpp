// thermo.hpp — thermal states and the witness quantities of probing:
// formal factors ξ(n), generalized inverse temperatures β(n), β_eff, level
// shifts, inner-energy change, two-level cooling and state fidelities.
//
// Units: ħ = k_B = 1. Every Boltzmann sum is evaluated with energies shifted
// by their minimum; all results are invariant under that shift.

#pragma once

#include "qprobe/fn_transform.hpp"
#include "qprobe/operator_core.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace qprobe {

inline constexpr double kBetaEffTol = 1e-8;
inline constexpr double kLeakageTol = 1e-8;

struct ThermalAnalysis {
    double beta{1.0};
    std::vector<double> xi;
    std::vector<double> beta_profile;
    std::optional<double> beta_eff;
    std::vector<double> level_shifts;
    double delta_U{0.0};
    std::optional<double> delta_U_unnormalized;
    std::optional<double> delta_T;
    double fidelity{1.0};
};

// Tr_A e^{-βH} / Tr e^{-βH}.
Matrix reduced_system_state(const Matrix& H_total, double beta, const ProductSpace& space);

// e^{-βH} / Tr e^{-βH} on whatever space H lives on.
Matrix gibbs_state(const Matrix& H, double beta);

// ξ(n) = Tr e^{-β(h_A + H(n))} for every system level. V_eff must be block
// diagonal in the system index (leakage <= leakage_tol).
std::vector<double> formal_factors(const Matrix& H_A, const Matrix& V_eff, double beta, const ProductSpace& space,
                                   double leakage_tol = kLeakageTol);

// β(n) = β + ln(ξ(n)/ξ(n+1)) / (E_{n+1} - E_n)
std::vector<double> generalized_beta_profile(const std::vector<double>& xi, const RealVector& energies, double beta);

// Population form: β(n) = ln(P_n/P_{n+1}) / Δ_n.
std::vector<double> beta_profile_from_populations(const std::vector<double>& populations, const RealVector& energies);

// Log form of the ratio condition on consecutive gaps,
//   Δ_n ln(ξ(n+1)/ξ(n+2)) - Δ_{n+1} ln(ξ(n)/ξ(n+1)),
// one entry per n; all zero iff the β(n) profile is flat.
std::vector<double> ratio_condition_residuals(const std::vector<double>& xi, const RealVector& energies);

// Mean of the profile when max|β(n) - mean| <= tol·max(1, |mean|), else nullopt.
std::optional<double> effective_beta(const std::vector<double>& beta_profile, double tol = kBetaEffTol);

// β(n) = β (1 - (|λ_{n+1}|² - |λ_n|²) / (E_{n+1} - E_n) · ε)
std::vector<double> dephasing_beta_closed_form(const std::vector<double>& lambdas, const RealVector& energies,
                                               double eps, double beta);

// ΔE_n = -ln ξ(n) / β
std::vector<double> level_shifts_from_xi(const std::vector<double>& xi, double beta);

// diag(e^{-βE_n} ξ(n)) / Z'_S
Matrix modified_thermal_state(const RealVector& energies, const std::vector<double>& xi, double beta);

// Tr[H_S ρ_S] - Tr[H_S e^{-βH_S}/Z_S]
double inner_energy_change(const Matrix& rho_S, double beta, const Matrix& h_system);

// Σ_n E_n [e^{-β_eff E_n} - e^{-β E_n}], no partition-function normalization.
double inner_energy_change_unnormalized(const RealVector& energies, double beta, double beta_eff);

struct TlsAnalysis {
    double chi{0.0};       // |g|² / (ω_b - Δ)
    double xi_e{0.0};
    double xi_g{0.0};
    double beta_eff{0.0};
    double delta_T{0.0};   // temperature decrease T - T_eff
    std::size_t terms{0};
    bool weak_detuning{false};  // ω_b < 10 Δ
};

// Dispersive two-level / cavity factors, summed until the geometric tail is
// below 1e-14 of the partial sum. max_terms = 0 means no cap beyond 10^7.
TlsAnalysis tls_analysis(double omega_b, cplx g, double delta, double beta, std::size_t max_terms = 0);

// T - T_eff for a two-level system: X/(β + X) · T with X = ln(ξ_g/ξ_e)/Δ.
double tls_temperature_decrease(double xi_g, double xi_e, double delta, double beta);

// Σ e^{-βE_n} √ξ(n) / [(Σ e^{-βE_n})^{1/2} (Σ e^{-βE_n} ξ(n))^{1/2}]
double fidelity_general(double beta, const RealVector& energies, const std::vector<double>& xi);

// Σ_n √(p_n q_n) for two distributions (normalized internally).
double bhattacharyya(const std::vector<double>& p, const std::vector<double>& q);

// √(sinh(βω/2) sinh(β(ω-λ)/2)) / sinh(β(ω-λ/2)/2)
double fidelity_oscillator_closed_form(double beta, double omega, double lambda);

// Truncated-series evaluation of the oscillator fidelity with ξ(n) = e^{βλn};
// levels are added until every dropped term is below 1e-16.
double fidelity_oscillator_series(double beta, double omega, double lambda);

// 1/(β(ω/λ - 1)) = T_eff - T for β_eff = β(1 - λ/ω).
double temperature_shift_oscillator(double beta, double omega, double lambda);

} // namespace qprobe
