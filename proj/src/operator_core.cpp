#include "qprobe/operator_core.hpp"

#include "qprobe/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>
#include <string>

namespace qprobe {

namespace {

void require_square(const Matrix& a, const char* what) {
    if (a.rows() != a.cols()) {
        throw DimensionError(std::string(what) + ": operator must be square");
    }
}

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

} // namespace

ProductSpace::ProductSpace(std::size_t sys, std::vector<std::size_t> app)
    : sys_dim(sys), app_dims(std::move(app)) {
    if (sys_dim == 0) throw DimensionError("ProductSpace: system dimension must be >= 1");
    for (auto d : app_dims) {
        if (d == 0) throw DimensionError("ProductSpace: apparatus factor dimension must be >= 1");
    }
}

std::size_t ProductSpace::app_dim() const {
    std::size_t d = 1;
    for (auto f : app_dims) d *= f;
    return d;
}

Matrix tensor(const Matrix& a, const Matrix& b) {
    require_square(a, "tensor");
    require_square(b, "tensor");
    const Eigen::Index na = a.rows(), nb = b.rows();
    Matrix out = Matrix::Zero(na * nb, na * nb);
    for (Eigen::Index i = 0; i < na; ++i) {
        for (Eigen::Index j = 0; j < na; ++j) {
            if (a(i, j) != cplx(0.0)) out.block(i * nb, j * nb, nb, nb) = a(i, j) * b;
        }
    }
    return out;
}

Matrix tensor(const Matrix& a, const Matrix& b, const ProductSpace& space) {
    if (a.rows() != idx(space.sys_dim) || b.rows() != idx(space.app_dim())) {
        std::ostringstream msg;
        msg << "tensor: factor dimensions " << a.rows() << " x " << b.rows()
            << " do not match product space " << space.sys_dim << " x " << space.app_dim();
        throw DimensionError(msg.str());
    }
    return tensor(a, b);
}

Matrix identity(std::size_t dim) { return Matrix::Identity(idx(dim), idx(dim)); }

Matrix embed_mode(const Matrix& local_op, std::size_t mode, const std::vector<std::size_t>& app_dims) {
    if (mode >= app_dims.size()) throw DimensionError("embed_mode: mode index out of range");
    if (local_op.rows() != idx(app_dims[mode])) throw DimensionError("embed_mode: local operator dimension mismatch");
    std::size_t before = 1, after = 1;
    for (std::size_t k = 0; k < mode; ++k) before *= app_dims[k];
    for (std::size_t k = mode + 1; k < app_dims.size(); ++k) after *= app_dims[k];
    return tensor(tensor(identity(before), local_op), identity(after));
}

double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

double hermiticity_error(const Matrix& a) {
    require_square(a, "hermiticity_error");
    return max_abs(a - a.adjoint());
}

bool is_hermitian(const Matrix& a, double tol) {
    return hermiticity_error(a) <= tol * std::max(1.0, max_abs(a));
}

void require_hermitian(const Matrix& a, const char* what) {
    if (!is_hermitian(a)) {
        std::ostringstream msg;
        msg << what << ": operator is not Hermitian (max|A - A^dag| = " << hermiticity_error(a) << ")";
        throw NonHermitianError(msg.str());
    }
}

Matrix hermitian_part(const Matrix& a) { return 0.5 * (a + a.adjoint()); }

SpectralDecomposition eig_hermitian(const Matrix& a) {
    require_square(a, "eig_hermitian");
    if (a.rows() == 0) throw DimensionError("eig_hermitian: empty operator");
    require_hermitian(a, "eig_hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(a));
    if (solver.info() != Eigen::Success) throw std::runtime_error("eig_hermitian: decomposition failed");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

Matrix func_of_hermitian(const SpectralDecomposition& sd, const std::function<double(double)>& f) {
    const Eigen::Index n = sd.eigenvalues.size();
    RealVector fv(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        fv(i) = f(sd.eigenvalues(i));
        if (!std::isfinite(fv(i))) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "func_of_hermitian: function overflows at eigenvalue " << sd.eigenvalues(i);
            throw OverflowError(msg.str());
        }
    }
    Matrix out = (sd.eigenvectors * fv.cast<cplx>().asDiagonal()) * sd.eigenvectors.adjoint();
    return hermitian_part(out);
}

Matrix partial_trace_system(const Matrix& a, const ProductSpace& space) {
    require_square(a, "partial_trace_system");
    if (a.rows() != idx(space.total_dim())) throw DimensionError("partial_trace_system: operator does not live on the product space");
    const Eigen::Index ns = idx(space.sys_dim), na = idx(space.app_dim());
    Matrix out(ns, ns);
    for (Eigen::Index i = 0; i < ns; ++i) {
        for (Eigen::Index j = 0; j < ns; ++j) out(i, j) = a.block(i * na, j * na, na, na).trace();
    }
    return out;
}

Matrix system_block(const Matrix& a, const ProductSpace& space, std::size_t n, std::size_t m) {
    if (a.rows() != idx(space.total_dim()) || a.cols() != a.rows()) throw DimensionError("system_block: operator does not live on the product space");
    if (n >= space.sys_dim || m >= space.sys_dim) throw DimensionError("system_block: system index out of range");
    const Eigen::Index na = idx(space.app_dim());
    return a.block(idx(n) * na, idx(m) * na, na, na);
}

Matrix commutator(const Matrix& a, const Matrix& b) {
    require_square(a, "commutator");
    if (a.rows() != b.rows() || b.rows() != b.cols()) throw DimensionError("commutator: dimension mismatch");
    return a * b - b * a;
}

double commutator_norm(const Matrix& a, const Matrix& b) { return commutator(a, b).norm(); }

Matrix restrict_apparatus(const Matrix& a, const ProductSpace& from, const ProductSpace& to) {
    if (a.rows() != idx(from.total_dim()) || a.cols() != a.rows()) throw DimensionError("restrict_apparatus: operator does not live on the source space");
    if (from.sys_dim != to.sys_dim || from.app_dims.size() != to.app_dims.size()) throw DimensionError("restrict_apparatus: incompatible factor structure");
    for (std::size_t k = 0; k < from.app_dims.size(); ++k) {
        if (to.app_dims[k] > from.app_dims[k]) throw DimensionError("restrict_apparatus: target factor larger than source");
    }
    // Map each retained apparatus multi-index to its position in the source.
    const std::size_t nf = from.app_dims.size();
    std::vector<std::size_t> kept;
    kept.reserve(to.app_dim());
    std::vector<std::size_t> digits(nf, 0);
    for (std::size_t t = 0; t < to.app_dim(); ++t) {
        std::size_t src = 0;
        for (std::size_t k = 0; k < nf; ++k) src = src * from.app_dims[k] + digits[k];
        kept.push_back(src);
        for (std::size_t k = nf; k-- > 0;) {
            if (++digits[k] < to.app_dims[k]) break;
            digits[k] = 0;
        }
    }
    const std::size_t na_from = from.app_dim(), na_to = to.app_dim();
    Matrix out(idx(to.total_dim()), idx(to.total_dim()));
    for (std::size_t n = 0; n < to.sys_dim; ++n) {
        for (std::size_t i = 0; i < na_to; ++i) {
            for (std::size_t m = 0; m < to.sys_dim; ++m) {
                for (std::size_t j = 0; j < na_to; ++j) {
                    out(idx(n * na_to + i), idx(m * na_to + j)) = a(idx(n * na_from + kept[i]), idx(m * na_from + kept[j]));
                }
            }
        }
    }
    return out;
}

} // namespace qprobe
