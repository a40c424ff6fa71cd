#include "oracles.hpp"
#include "qprobe/errors.hpp"
#include "qprobe/fn_transform.hpp"
#include "qprobe/models.hpp"
#include "qprobe/oracle.hpp"

#include <doctest.h>

#include <cmath>

using namespace qprobe;

namespace {

Matrix two_level_h0(double delta) {
    Matrix h = Matrix::Zero(2, 2);
    h(1, 1) = delta;
    return h;
}
Matrix sigma_x(double g) {
    Matrix v = Matrix::Zero(2, 2);
    v(0, 1) = v(1, 0) = g;
    return v;
}

} // namespace

TEST_SUITE("fn_transform") {

TEST_CASE("zero coupling gives zero generator") {
    const Matrix h0 = oracle::random_hermitian(4, 5);
    const auto sol = solve_generator(h0, Matrix::Zero(4, 4));
    CHECK(max_abs(sol.S) == 0.0);
    CHECK(sol.residual == 0.0);
    CHECK(max_abs(effective_hamiltonian(h0, Matrix::Zero(4, 4), sol) - h0) == 0.0);
}

TEST_CASE("two-level generator and effective Hamiltonian") {
    const double delta = 1.0, g = 0.1;
    const Matrix h0 = two_level_h0(delta), v = sigma_x(g);
    const auto sol = solve_generator(h0, v);
    Matrix expected = Matrix::Zero(2, 2);
    expected(0, 1) = g / delta;
    expected(1, 0) = -g / delta;
    CHECK(max_abs(sol.S - expected) <= 1e-15);
    // residual by direct multiplication
    CHECK(max_abs(v + h0 * sol.S - sol.S * h0) <= 1e-12);
    CHECK(sol.residual <= 1e-12);
    CHECK(sol.zeroed_pairs.empty());

    const Matrix heff = effective_hamiltonian(h0, v, sol);
    CHECK(std::abs(heff(0, 0) - (-g * g / delta)) <= 1e-15);
    CHECK(std::abs(heff(1, 1) - (delta + g * g / delta)) <= 1e-15);
    CHECK(std::abs(heff(0, 1)) <= 1e-15);

    // exact 2x2 spectrum: Δ/2 ± √(Δ²/4 + g²)
    const double r = std::sqrt(delta * delta / 4 + g * g);
    CHECK(std::abs(heff(0, 0).real() - (delta / 2 - r)) <= 2 * std::pow(g, 4) / std::pow(delta, 3));
    CHECK(std::abs(heff(1, 1).real() - (delta / 2 + r)) <= 2 * std::pow(g, 4) / std::pow(delta, 3));
}

TEST_CASE("two-level fourth-order bound for g/Δ <= 0.2") {
    for (double delta : {1.0, 2.5}) {
        for (double ratio : {0.2, 0.15, 0.1, 0.05, 0.01}) {
            const double g = ratio * delta;
            const Matrix h0 = two_level_h0(delta), v = sigma_x(g);
            const auto sol = solve_generator(h0, v);
            const RealVector a = eig_hermitian(effective_hamiltonian(h0, v, sol)).eigenvalues;
            const double r = std::sqrt(delta * delta / 4 + g * g);
            const double err = std::max(std::abs(a(0) - (delta / 2 - r)), std::abs(a(1) - (delta / 2 + r)));
            CHECK(err <= 2 * std::pow(g, 4) / std::pow(delta, 3));
        }
    }
}

TEST_CASE("degenerate pair is zeroed and reported") {
    Matrix h0 = Matrix::Zero(3, 3);
    h0(2, 2) = 1.0;
    Matrix v = Matrix::Zero(3, 3);
    v(0, 1) = v(1, 0) = 0.3;
    v(0, 2) = v(2, 0) = 0.1;
    const auto sol = solve_generator(h0, v);
    REQUIRE(sol.zeroed_pairs.size() == 1);
    CHECK(sol.zeroed_pairs[0] == std::pair<std::size_t, std::size_t>{0, 1});
    CHECK(sol.residual == doctest::Approx(0.3 * std::sqrt(2.0)).epsilon(1e-12));
    // the uncancelled part stays in H_eff at first order
    const Matrix heff = effective_hamiltonian(h0, v, sol);
    CHECK(std::abs(heff(0, 1) - 0.3) <= 1e-12);
    CHECK(is_hermitian(heff));
}

TEST_CASE("generator properties on random instances") {
    for (std::uint64_t seed = 100; seed < 110; ++seed) {
        const auto inst = random_fn_instance(6, seed);
        const Matrix v = 0.1 * inst.V_unit;
        CHECK(std::abs(v.norm() - 0.1) < 1e-14);
        const auto sol = solve_generator(inst.H0, v);
        CHECK(sol.zeroed_pairs.empty());
        CHECK(max_abs(sol.S + sol.S.adjoint()) <= 1e-10);
        CHECK((v + inst.H0 * sol.S - sol.S * inst.H0).norm() <= 1e-10 * v.norm());
        CHECK(sol.residual <= 1e-10 * v.norm());
        const auto h0_spec = eig_hermitian(inst.H0).eigenvalues;
        CHECK(h0_spec.maxCoeff() - h0_spec.minCoeff() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("eigenvalue error is third order on random instances") {
    // Reference spectra come from an independent dense solve on H0 + V.
    const std::vector<double> scales{0.1, 0.05, 0.025, 0.0125, 0.00625};
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto inst = random_fn_instance(6, seed);
        std::vector<double> errs;
        for (double s : scales) {
            const Matrix v = s * inst.V_unit;
            const RealVector a = eig_hermitian(effective_hamiltonian(inst.H0, v, solve_generator(inst.H0, v))).eigenvalues;
            Eigen::SelfAdjointEigenSolver<Matrix> ref(inst.H0 + v, Eigen::EigenvaluesOnly);
            errs.push_back((a - ref.eigenvalues()).cwiseAbs().maxCoeff());
        }
        // the last halving pins the asymptotic exponent
        const double tail = std::log(errs[3] / errs[4]) / std::log(2.0);
        CHECK(tail == doctest::Approx(3.0).epsilon(0.1));
    }
}

TEST_CASE("branch decomposition") {
    const ProductSpace space(3, {2});
    const auto zero = branch_decompose(Matrix::Zero(6, 6), space);
    CHECK(zero.branch_hamiltonians.size() == 3);
    CHECK(zero.offdiag_leakage == 0.0);
    for (const auto& h : zero.branch_hamiltonians) CHECK(max_abs(h) == 0.0);

    Matrix c = Matrix::Zero(3, 3);
    c(0, 0) = 0.5;
    c(1, 1) = -1.0;
    c(2, 2) = 2.0;
    const Matrix b = oracle::random_hermitian(2, 3);
    const auto bd = branch_decompose(oracle::kron(c, b), space);
    CHECK(bd.offdiag_leakage == 0.0);
    for (int n = 0; n < 3; ++n) CHECK(max_abs(bd.branch_hamiltonians[static_cast<std::size_t>(n)] - c(n, n) * b) == 0.0);
    CHECK(max_abs(branch_reassemble(bd, space) - oracle::kron(c, b)) == 0.0);
}

TEST_CASE("branch decomposition is lossless") {
    const ProductSpace space(2, {3});
    const Matrix x = oracle::random_hermitian(6, 17);
    const auto bd = branch_decompose(x, space);
    const Matrix diag_part = branch_reassemble(bd, space);
    CHECK((x - diag_part).norm() == doctest::Approx(bd.offdiag_leakage).epsilon(1e-14));
    // off-diagonal remainder by explicit block indexing
    Matrix rest = x;
    for (int n = 0; n < 2; ++n) rest.block(3 * n, 3 * n, 3, 3).setZero();
    CHECK(max_abs(diag_part + rest - x) == 0.0);
}

TEST_CASE("dephasing model after transform: block diagonal with polaron shift") {
    // Padding by one Fock level makes the second-order products exact on the
    // retained levels, so each branch is shifted by exactly -λ_n² ε.
    SystemSpec sys{SystemKind::truncated_oscillator, 1.0, 1.0, 3};
    ApparatusSpec app{ApparatusKind::boson_bath, {{1.0, cplx(0.1, 0.0), 5}, {1.7, cplx(0.05, -0.03), 4}}};
    const auto padded = build_total_hamiltonian(sys, app, CouplingSpec{}, kDefaultDimensionCap, 1);
    const ProductSpace target(3, app.dims());
    const Matrix h0 = padded.H_S + padded.H_A;
    const auto sol = solve_generator(h0, padded.V_AS);
    CHECK(sol.residual <= 1e-10 * padded.V_AS.norm());
    const Matrix heff = restrict_apparatus(effective_hamiltonian(h0, padded.V_AS, sol), padded.space, target);
    const Matrix v_eff = heff - restrict_apparatus(h0, padded.space, target);
    const auto bd = branch_decompose(v_eff, target);
    CHECK(bd.offdiag_leakage <= 1e-8);
    const double eps = self_energy(app);
    const std::size_t na = target.app_dim();
    for (std::size_t n = 0; n < 3; ++n) {
        const Matrix expected = -static_cast<double>(n) * eps * identity(na);
        CHECK(max_abs(bd.branch_hamiltonians[n] - expected) <= 1e-12);
    }
    CHECK(nondemolition_residual(restrict_apparatus(padded.H_S, padded.space, target), v_eff) <= 1e-10);
}

TEST_CASE("non-demolition residual") {
    SystemSpec sys;
    ApparatusSpec cav{ApparatusKind::single_cavity, {{10.0, cplx(0.5, 0.0), 4}}};
    const auto dip = build_total_hamiltonian(sys, cav, CouplingSpec{CouplingKind::dipole, LambdaRule::sqrt_n, {}, true});
    CHECK(nondemolition_residual(dip.H_S, dip.V_AS) > 0.0);

    Matrix hs = Matrix::Zero(3, 3);
    for (int n = 0; n < 3; ++n) hs(n, n) = 0.4 * n + 0.1;
    Matrix f = Matrix::Zero(3, 3);
    for (int n = 0; n < 3; ++n) f(n, n) = std::exp(-hs(n, n).real());
    const Matrix any = oracle::random_hermitian(4, 2);
    CHECK(nondemolition_residual(oracle::kron(hs, identity(4)), oracle::kron(f, any)) == 0.0);
}

TEST_CASE("shape errors") {
    CHECK_THROWS_AS(solve_generator(identity(3), identity(2)), DimensionError);
    CHECK_THROWS_AS(branch_decompose(identity(5), ProductSpace(2, {3})), DimensionError);
}

}
