// oracle.hpp — brute-force references that certify the perturbative path:
// exact diagonalization of the untransformed Hamiltonian, power-law fits of
// error scaling, and the exact Jaynes–Cummings comparison for the dispersive
// two-level/cavity factors.
//
// Nothing here calls into thermo or fn_transform; the code paths stay
// independent of the ones they check.

#pragma once

#include "qprobe/operator_core.hpp"

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

namespace qprobe {

struct ExactReference {
    Matrix rho_S;
    RealVector energies;              // eigenvalues of h_S, ascending
    std::vector<double> populations;  // <n|ρ_S|n> in the h_S eigenbasis
    std::vector<double> beta_profile; // ln(P_n/P_{n+1}) / Δ_n
};

// H_S, H_A, V_AS on the full product space; h_S is recovered from H_S.
ExactReference exact_reference_state(const Matrix& H_S, const Matrix& H_A, const Matrix& V_AS, double beta,
                                     const ProductSpace& space, std::size_t dimension_cap = 4096);

struct ScalingReport {
    std::vector<double> parameters;
    std::vector<double> errors;
    std::vector<bool> used;   // false for points dropped as round-off
    double fitted_exponent{0.0};
    double r_squared{0.0};
    bool exact{false};        // all used errors zero: exponent is +inf
};

// Least-squares slope of log(error) against log(parameter). Parameters must be
// strictly decreasing, at least 3 points spanning >= 4x. Points whose error is
// below 100·eps·spectral_range are dropped (spectral_range = 0 disables).
ScalingReport scaling_exponent(const std::vector<double>& parameters, const std::vector<double>& errors,
                               double spectral_range = 0.0);

struct JcComparison {
    double chi{0.0};
    double series_xi_e{0.0}, series_xi_g{0.0};
    double geometric_xi_e{0.0}, geometric_xi_g{0.0};
    double exact_xi_e{0.0}, exact_xi_g{0.0};
    double series_beta_eff{0.0}, geometric_beta_eff{0.0}, exact_beta_eff{0.0};
    double series_vs_geometric{0.0};   // max relative deviation of (ξ_e, ξ_g)
    double series_vs_exact{0.0};
    double geometric_vs_exact{0.0};
};

// Informational: printed dispersive formula vs exact JC doublet spectra.
JcComparison dispersive_jc_diagnostic(double omega_b, cplx g, double delta, double beta, std::size_t n_trunc);

// Random instance for the FN checks: H0 with spectral range 1 and minimum gap
// >= min_gap, V Hermitian with zero diagonal in the H0 eigenbasis and
// |V|_F = v_norm.
struct FnInstance {
    Matrix H0;
    Matrix V_unit;  // |V_unit|_F = 1
};

FnInstance random_fn_instance(std::size_t dim, std::uint64_t seed, double min_gap = 0.1);

} // namespace qprobe
