// fn_transform.hpp — second-order Fröhlich–Nakajima (Schrieffer–Wolff) step.
//
// Given H = H0 + V, the anti-Hermitian generator S solves V + [H0, S] = 0 on
// every non-degenerate pair of H0 eigenstates, and
//   H_eff = H0 + R + ½[V - R, S],   R = V + [H0, S]
// where R collects the part of V that S cannot remove (diagonal and
// degenerate-pair elements in the H0 eigenbasis). For the probing models R = 0
// and H_eff reduces to H0 + ½[V, S].

#pragma once

#include "qprobe/operator_core.hpp"

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace qprobe {

struct GeneratorSolution {
    Matrix S;              // anti-Hermitian
    double residual{0.0};  // |V + [H0, S]|_F
    std::vector<std::pair<std::size_t, std::size_t>> zeroed_pairs;  // (a < b) in the H0 eigenbasis
};

// Default degeneracy tolerance: 1e-9 × spectral range of H0 (1e-9 if the range is zero).
double default_degeneracy_tol(const Matrix& H0);

GeneratorSolution solve_generator(const Matrix& H0, const Matrix& V, std::optional<double> degeneracy_tol = std::nullopt);

Matrix effective_hamiltonian(const Matrix& H0, const Matrix& V, const GeneratorSolution& sol);

struct BranchDecomposition {
    std::vector<Matrix> branch_hamiltonians;  // H(n), apparatus space
    double offdiag_leakage{0.0};              // |blocks n != m|_F
};

BranchDecomposition branch_decompose(const Matrix& op, const ProductSpace& space);

// Σ_n |n><n| ⊗ H(n)
Matrix branch_reassemble(const BranchDecomposition& branches, const ProductSpace& space);

// |[H_S, V_eff]|_F
double nondemolition_residual(const Matrix& H_S, const Matrix& V_eff);

} // namespace qprobe
