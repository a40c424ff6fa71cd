#include "qprobe/fn_transform.hpp"

#include "qprobe/errors.hpp"

#include <cmath>
#include <sstream>

namespace qprobe {

namespace {

bool is_diagonal(const Matrix& a) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            if (i != j && a(i, j) != cplx(0.0)) return false;
        }
    }
    return true;
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
    if (a.rows() != a.cols() || a.rows() != b.rows() || b.rows() != b.cols()) {
        throw DimensionError(std::string(what) + ": operators must be square and of equal dimension");
    }
}

} // namespace

double default_degeneracy_tol(const Matrix& H0) {
    const RealVector d = is_diagonal(H0) ? RealVector(H0.diagonal().real()) : eig_hermitian(H0).eigenvalues;
    const double range = d.size() ? d.maxCoeff() - d.minCoeff() : 0.0;
    return range > 0.0 ? 1e-9 * range : 1e-9;
}

GeneratorSolution solve_generator(const Matrix& H0, const Matrix& V, std::optional<double> degeneracy_tol) {
    require_same_shape(H0, V, "solve_generator");
    require_hermitian(H0, "solve_generator(H0)");
    require_hermitian(V, "solve_generator(V)");

    // Diagonal H0 (the product-basis models) needs no rotation.
    const bool diagonal = is_diagonal(H0);
    RealVector energies;
    Matrix U;
    Matrix Vp;
    if (diagonal) {
        energies = H0.diagonal().real();
        Vp = V;
    } else {
        auto sd = eig_hermitian(H0);
        energies = sd.eigenvalues;
        U = std::move(sd.eigenvectors);
        Vp = U.adjoint() * V * U;
    }
    const double tol = degeneracy_tol ? *degeneracy_tol : default_degeneracy_tol(H0);
    const double drop_floor = 1e-13 * max_abs(V);

    GeneratorSolution sol;
    Matrix Sp = Matrix::Zero(V.rows(), V.cols());
    for (Eigen::Index b = 0; b < Vp.cols(); ++b) {
        for (Eigen::Index a = 0; a < Vp.rows(); ++a) {
            if (a == b) continue;
            const double gap = energies(b) - energies(a);
            if (std::abs(gap) > tol) {
                Sp(a, b) = Vp(a, b) / gap;
            } else if (a < b && std::abs(Vp(a, b)) > drop_floor) {
                sol.zeroed_pairs.emplace_back(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
            }
        }
    }
    sol.S = diagonal ? Sp : Matrix(U * Sp * U.adjoint());
    sol.S = 0.5 * (sol.S - sol.S.adjoint());
    sol.residual = (V + commutator(H0, sol.S)).norm();
    return sol;
}

Matrix effective_hamiltonian(const Matrix& H0, const Matrix& V, const GeneratorSolution& sol) {
    require_same_shape(H0, V, "effective_hamiltonian");
    require_same_shape(H0, sol.S, "effective_hamiltonian");
    const Matrix R = V + commutator(H0, sol.S);
    const Matrix second = 0.5 * commutator(V - R, sol.S);
    if (!is_hermitian(second, 1e-10)) {
        std::ostringstream msg;
        msg << "effective_hamiltonian: second-order term is not Hermitian (max|A - A^dag| = "
            << hermiticity_error(second) << "); generator does not match (H0, V)";
        throw NonHermitianError(msg.str());
    }
    return hermitian_part(H0 + R + second);
}

BranchDecomposition branch_decompose(const Matrix& op, const ProductSpace& space) {
    if (op.rows() != static_cast<Eigen::Index>(space.total_dim()) || op.cols() != op.rows()) {
        throw DimensionError("branch_decompose: operator does not live on the product space");
    }
    BranchDecomposition out;
    out.branch_hamiltonians.reserve(space.sys_dim);
    double leak2 = 0.0;
    for (std::size_t n = 0; n < space.sys_dim; ++n) {
        for (std::size_t m = 0; m < space.sys_dim; ++m) {
            if (n == m) {
                out.branch_hamiltonians.push_back(system_block(op, space, n, n));
            } else {
                leak2 += system_block(op, space, n, m).squaredNorm();
            }
        }
    }
    out.offdiag_leakage = std::sqrt(leak2);
    return out;
}

Matrix branch_reassemble(const BranchDecomposition& branches, const ProductSpace& space) {
    if (branches.branch_hamiltonians.size() != space.sys_dim) throw DimensionError("branch_reassemble: branch count does not match system dimension");
    const auto na = static_cast<Eigen::Index>(space.app_dim());
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(space.total_dim()), static_cast<Eigen::Index>(space.total_dim()));
    for (std::size_t n = 0; n < space.sys_dim; ++n) {
        const auto& h = branches.branch_hamiltonians[n];
        if (h.rows() != na || h.cols() != na) throw DimensionError("branch_reassemble: branch dimension mismatch");
        out.block(static_cast<Eigen::Index>(n) * na, static_cast<Eigen::Index>(n) * na, na, na) = h;
    }
    return out;
}

double nondemolition_residual(const Matrix& H_S, const Matrix& V_eff) { return commutator_norm(H_S, V_eff); }

} // namespace qprobe
