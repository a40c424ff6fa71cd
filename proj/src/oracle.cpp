#include "qprobe/oracle.hpp"

#include "qprobe/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace qprobe {

namespace {

using Index = Eigen::Index;

double rel_dev(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), std::numeric_limits<double>::min()); }

} // namespace

ExactReference exact_reference_state(const Matrix& H_S, const Matrix& H_A, const Matrix& V_AS, double beta,
                                     const ProductSpace& space, std::size_t dimension_cap) {
    const std::size_t dim = space.total_dim();
    if (dim > dimension_cap) {
        std::ostringstream msg;
        msg << "exact_reference_state: dimension " << dim << " exceeds cap " << dimension_cap;
        throw ResourceError(msg.str());
    }
    if (H_S.rows() != static_cast<Index>(dim) || H_A.rows() != H_S.rows() || V_AS.rows() != H_S.rows()) {
        throw DimensionError("exact_reference_state: operators do not live on the product space");
    }
    if (!(beta > 0.0)) throw DomainError("exact_reference_state: beta must be > 0");

    const Matrix H = H_S + H_A + V_AS;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (H + H.adjoint()));
    if (solver.info() != Eigen::Success) throw std::runtime_error("exact_reference_state: diagonalization failed");
    const RealVector& lam = solver.eigenvalues();
    const Matrix& U = solver.eigenvectors();

    const Index ns = static_cast<Index>(space.sys_dim), na = static_cast<Index>(space.app_dim());
    RealVector w(lam.size());
    for (Index e = 0; e < lam.size(); ++e) w(e) = std::exp(-beta * (lam(e) - lam(0)));
    const double z = w.sum();

    // ρ_S(i,j) = Σ_e w_e Σ_k U(i na + k, e) conj(U(j na + k, e)) / Z
    ExactReference ref;
    ref.rho_S = Matrix::Zero(ns, ns);
    for (Index e = 0; e < lam.size(); ++e) {
        if (w(e) == 0.0) continue;
        for (Index i = 0; i < ns; ++i) {
            for (Index j = 0; j < ns; ++j) {
                cplx acc = 0.0;
                for (Index k = 0; k < na; ++k) acc += U(i * na + k, e) * std::conj(U(j * na + k, e));
                ref.rho_S(i, j) += w(e) * acc;
            }
        }
    }
    ref.rho_S /= z;

    // h_S = Tr_A(H_S) / dim(A)
    Matrix h_s = Matrix::Zero(ns, ns);
    for (Index i = 0; i < ns; ++i) {
        for (Index j = 0; j < ns; ++j) {
            for (Index k = 0; k < na; ++k) h_s(i, j) += H_S(i * na + k, j * na + k);
        }
    }
    h_s /= static_cast<double>(na);
    Eigen::SelfAdjointEigenSolver<Matrix> sys_solver(0.5 * (h_s + h_s.adjoint()));
    ref.energies = sys_solver.eigenvalues();
    const Matrix& Vs = sys_solver.eigenvectors();
    for (Index n = 0; n < ns; ++n) ref.populations.push_back((Vs.col(n).adjoint() * ref.rho_S * Vs.col(n))(0, 0).real());
    for (Index n = 0; n + 1 < ns; ++n) {
        const double pn = ref.populations[static_cast<std::size_t>(n)], pm = ref.populations[static_cast<std::size_t>(n + 1)];
        const double gap = ref.energies(n + 1) - ref.energies(n);
        if (!(pn > 0.0) || !(pm > 0.0) || !(gap > 0.0)) {
            throw DomainError("exact_reference_state: populations underflow or system levels are degenerate");
        }
        ref.beta_profile.push_back(std::log(pn / pm) / gap);
    }
    return ref;
}

ScalingReport scaling_exponent(const std::vector<double>& parameters, const std::vector<double>& errors, double spectral_range) {
    if (parameters.size() != errors.size() || parameters.size() < 3) throw DomainError("scaling_exponent: need at least 3 (parameter, error) pairs");
    for (std::size_t i = 0; i < parameters.size(); ++i) {
        if (!(parameters[i] > 0.0)) throw DomainError("scaling_exponent: parameters must be > 0");
        if (i > 0 && !(parameters[i] < parameters[i - 1])) throw DomainError("scaling_exponent: parameters must be strictly decreasing");
        if (!(errors[i] >= 0.0)) throw DomainError("scaling_exponent: errors must be >= 0");
    }
    if (parameters.front() / parameters.back() < 4.0) throw DomainError("scaling_exponent: parameter range must span at least 4x");

    ScalingReport r;
    r.parameters = parameters;
    r.errors = errors;
    const double floor = 100.0 * std::numeric_limits<double>::epsilon() * spectral_range;
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < parameters.size(); ++i) {
        const bool keep = errors[i] > 0.0 && errors[i] >= floor;
        r.used.push_back(keep);
        if (keep) {
            xs.push_back(std::log(parameters[i]));
            ys.push_back(std::log(errors[i]));
        }
    }
    if (xs.size() < 2) {
        r.exact = true;
        r.fitted_exponent = std::numeric_limits<double>::infinity();
        r.r_squared = 1.0;
        return r;
    }
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    r.fitted_exponent = sxy / sxx;
    r.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return r;
}

JcComparison dispersive_jc_diagnostic(double omega_b, cplx g, double delta, double beta, std::size_t n_trunc) {
    if (omega_b == delta) throw DomainError("dispersive_jc_diagnostic: resonance omega_b == delta");
    if (!(beta > 0.0) || !(omega_b > 0.0) || !(delta > 0.0)) throw DomainError("dispersive_jc_diagnostic: beta, omega_b, delta must be > 0");
    if (n_trunc < 2) throw DomainError("dispersive_jc_diagnostic: n_trunc must be >= 2");

    JcComparison c;
    c.chi = std::norm(g) / (omega_b - delta);
    const double rate = beta * (omega_b + c.chi);
    if (!(rate > 0.0)) throw DomainError("dispersive_jc_diagnostic: series does not converge");

    // Printed series.
    for (std::size_t n = 0;; ++n) {
        const double nd = static_cast<double>(n);
        c.series_xi_e += std::exp(-beta * (omega_b * nd + c.chi * (nd + 1.0)));
        c.series_xi_g += std::exp(-beta * (omega_b * nd + c.chi * nd));
        if (std::exp(-rate * (nd + 1.0)) / (-std::expm1(-rate)) < 1e-14 * c.series_xi_g) break;
        if (n > 10'000'000) throw DomainError("dispersive_jc_diagnostic: series does not converge");
    }
    // Geometric closed form.
    c.geometric_xi_g = 1.0 / (-std::expm1(-rate));
    c.geometric_xi_e = std::exp(-beta * c.chi) * c.geometric_xi_g;

    // Exact truncated JC: basis index s * N + m, s = 0 (g), 1 (e).
    const Index N = static_cast<Index>(n_trunc);
    Matrix H = Matrix::Zero(2 * N, 2 * N);
    for (Index m = 0; m < N; ++m) {
        H(m, m) = omega_b * static_cast<double>(m);
        H(N + m, N + m) = delta + omega_b * static_cast<double>(m);
    }
    for (Index m = 0; m + 1 < N; ++m) {
        // g σ+ b : |g, m+1> -> |e, m>
        H(N + m, m + 1) = g * std::sqrt(static_cast<double>(m + 1));
        H(m + 1, N + m) = std::conj(g) * std::sqrt(static_cast<double>(m + 1));
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(H);
    const RealVector& lam = solver.eigenvalues();
    const double e0 = lam.minCoeff();
    double se = 0.0, sg = 0.0;
    for (Index k = 0; k < lam.size(); ++k) {
        const double excited_weight = solver.eigenvectors().col(k).tail(N).squaredNorm();
        const double w = std::exp(-beta * (lam(k) - e0));
        if (excited_weight > 0.5) {
            se += w;
        } else {
            sg += w;
        }
    }
    // Undo the shift: ξ_e carries energies measured from Δ, ξ_g from 0.
    c.exact_xi_e = se * std::exp(-beta * (e0 - delta));
    c.exact_xi_g = sg * std::exp(-beta * e0);

    c.series_beta_eff = beta + std::log(c.series_xi_g / c.series_xi_e) / delta;
    c.geometric_beta_eff = beta + std::log(c.geometric_xi_g / c.geometric_xi_e) / delta;
    c.exact_beta_eff = beta + std::log(c.exact_xi_g / c.exact_xi_e) / delta;
    c.series_vs_geometric = std::max(rel_dev(c.series_xi_e, c.geometric_xi_e), rel_dev(c.series_xi_g, c.geometric_xi_g));
    c.series_vs_exact = std::max(rel_dev(c.series_xi_e, c.exact_xi_e), rel_dev(c.series_xi_g, c.exact_xi_g));
    c.geometric_vs_exact = std::max(rel_dev(c.geometric_xi_e, c.exact_xi_e), rel_dev(c.geometric_xi_g, c.exact_xi_g));
    return c;
}

FnInstance random_fn_instance(std::size_t dim, std::uint64_t seed, double min_gap) {
    if (dim < 2) throw DimensionError("random_fn_instance: dimension must be >= 2");
    if (!(min_gap * static_cast<double>(dim - 1) < 1.0)) throw DomainError("random_fn_instance: min_gap too large for unit range");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const Index n = static_cast<Index>(dim);

    RealVector e(n);
    for (;;) {
        for (Index i = 0; i < n; ++i) e(i) = uni(rng);
        std::sort(e.data(), e.data() + n);
        e = (e.array() - e(0)) / (e(n - 1) - e(0));
        double gap = 1.0;
        for (Index i = 0; i + 1 < n; ++i) gap = std::min(gap, e(i + 1) - e(i));
        if (gap >= min_gap) break;
    }

    Matrix z(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) z(i, j) = cplx(gauss(rng), gauss(rng));
    }
    const Matrix U = Eigen::HouseholderQR<Matrix>(z).householderQ() * Matrix::Identity(n, n);

    Matrix w = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) {
            w(i, j) = cplx(gauss(rng), gauss(rng));
            w(j, i) = std::conj(w(i, j));
        }
    }
    w /= w.norm();

    FnInstance inst;
    inst.H0 = U * e.cast<cplx>().asDiagonal() * U.adjoint();
    inst.H0 = 0.5 * (inst.H0 + inst.H0.adjoint());
    inst.V_unit = U * w * U.adjoint();
    inst.V_unit = 0.5 * (inst.V_unit + inst.V_unit.adjoint());
    return inst;
}

} // namespace qprobe
