// operator_core.hpp — dense operator algebra on system ⊗ apparatus product spaces.
//
// Index convention: the system factor is always the slowest-varying index, and
// apparatus factors follow in declaration order (first mode slowest). A basis
// state |n; m_1 ... m_K> therefore sits at
//   n * dim(A) + ((m_1 * d_2 + m_2) * d_3 + ...) .

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace qprobe {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Absolute entrywise hermiticity tolerance (scaled by max(1, |A|_max)).
inline constexpr double kHermitianTol = 1e-12;

struct ProductSpace {
    std::size_t sys_dim{1};
    std::vector<std::size_t> app_dims;

    ProductSpace() = default;
    ProductSpace(std::size_t sys, std::vector<std::size_t> app);

    std::size_t app_dim() const;
    std::size_t total_dim() const { return sys_dim * app_dim(); }

    bool operator==(const ProductSpace&) const = default;
};

struct SpectralDecomposition {
    RealVector eigenvalues;  // ascending
    Matrix eigenvectors;     // columns, unitary
};

// Kronecker product a ⊗ b (a is the slow index).
Matrix tensor(const Matrix& a, const Matrix& b);
// a on the system factor, b on the whole apparatus factor of `space`.
Matrix tensor(const Matrix& a, const Matrix& b, const ProductSpace& space);

// local_op acting on apparatus factor `mode`, identity elsewhere (apparatus space only).
Matrix embed_mode(const Matrix& local_op, std::size_t mode, const std::vector<std::size_t>& app_dims);

Matrix identity(std::size_t dim);

double max_abs(const Matrix& a);
double hermiticity_error(const Matrix& a);
bool is_hermitian(const Matrix& a, double tol = kHermitianTol);
// Throws NonHermitianError naming `what` if the check fails.
void require_hermitian(const Matrix& a, const char* what);
Matrix hermitian_part(const Matrix& a);

SpectralDecomposition eig_hermitian(const Matrix& a);

// U diag(f(λ)) U†. Throws OverflowError if f is non-finite on any eigenvalue.
Matrix func_of_hermitian(const SpectralDecomposition& sd, const std::function<double(double)>& f);

// Tr_A a, returned on the system factor.
Matrix partial_trace_system(const Matrix& a, const ProductSpace& space);

// Block <n| a |m> acting on the apparatus factor.
Matrix system_block(const Matrix& a, const ProductSpace& space, std::size_t n, std::size_t m);

Matrix commutator(const Matrix& a, const Matrix& b);
double commutator_norm(const Matrix& a, const Matrix& b);

// Projects `a` (on `from`) onto the subspace where every apparatus factor k keeps
// its first to.app_dims[k] levels. System dimension must match.
Matrix restrict_apparatus(const Matrix& a, const ProductSpace& from, const ProductSpace& to);

} // namespace qprobe
