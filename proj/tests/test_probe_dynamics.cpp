#include "oracles.hpp"
#include "qprobe/errors.hpp"
#include "qprobe/models.hpp"
#include "qprobe/probe_dynamics.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace qprobe;

namespace {

std::vector<double> grid(double t_max, int n) {
    std::vector<double> t;
    for (int i = 0; i <= n; ++i) t.push_back(t_max * i / n);
    return t;
}

// Branch n couples to the bath through λ_n Σ_k (g_k b_k† + h.c.).
BranchDecomposition dephasing_branches(const std::vector<double>& lambdas, const std::vector<BosonMode>& modes) {
    std::vector<std::size_t> dims;
    for (const auto& m : modes) dims.push_back(m.n_trunc);
    std::size_t na = 1;
    for (auto d : dims) na *= d;
    Matrix x = Matrix::Zero(static_cast<Eigen::Index>(na), static_cast<Eigen::Index>(na));
    for (std::size_t k = 0; k < modes.size(); ++k) {
        const Matrix b = oracle::lowering(static_cast<int>(modes[k].n_trunc));
        x += embed_mode(modes[k].g * b.adjoint() + std::conj(modes[k].g) * b, k, dims);
    }
    BranchDecomposition bd;
    for (double l : lambdas) bd.branch_hamiltonians.push_back(l * x);
    return bd;
}

Matrix free_bath(const std::vector<BosonMode>& modes) {
    std::vector<std::size_t> dims;
    for (const auto& m : modes) dims.push_back(m.n_trunc);
    std::size_t na = 1;
    for (auto d : dims) na *= d;
    Matrix h = Matrix::Zero(static_cast<Eigen::Index>(na), static_cast<Eigen::Index>(na));
    for (std::size_t k = 0; k < modes.size(); ++k) {
        const Matrix b = oracle::lowering(static_cast<int>(modes[k].n_trunc));
        h += embed_mode(modes[k].omega * b.adjoint() * b, k, dims);
    }
    return h;
}

} // namespace

TEST_SUITE("probe_dynamics") {

TEST_CASE("vacuum and propagator") {
    const Vector v = fock_vacuum({3, 2});
    CHECK(v.size() == 6);
    CHECK(v(0) == cplx(1.0, 0.0));
    CHECK(v.norm() == 1.0);

    const Matrix k = oracle::random_hermitian(5, 71);
    const auto sd = eig_hermitian(k);
    for (double t : {0.0, 0.3, 2.7, 40.0}) {
        const Matrix p = propagator(sd, t);
        CHECK(max_abs(p.adjoint() * p - identity(5)) <= 1e-10);
        CHECK(max_abs(p - oracle::expm(k, cplx(0.0, -t))) <= 1e-10);
    }
}

TEST_CASE("overlaps at t = 0 and on the diagonal") {
    const std::vector<BosonMode> modes{{1.0, cplx(0.3, 0.0), 8}};
    const auto rec = decoherence_matrix(dephasing_branches({0.0, 1.0, 1.5}, modes), free_bath(modes), fock_vacuum({8}), grid(5.0, 10));
    CHECK(rec.branches == 3);
    CHECK(rec.pairs.size() == 3);
    for (std::size_t m = 0; m < 3; ++m)
        for (std::size_t n = 0; n < 3; ++n) CHECK(std::abs(rec.magnitude(m, n, 0) - 1.0) <= 1e-12);
    for (std::size_t i = 0; i < rec.times.size(); ++i) CHECK(rec.magnitude(2, 2, i) == 1.0);
    CHECK(rec.magnitude(0, 1, 3) == rec.magnitude(1, 0, 3));
}

TEST_CASE("single-mode overlap matches the displaced-oscillator closed form") {
    const double omega = 1.3, g = 0.35;
    const std::vector<BosonMode> modes{{omega, cplx(g, 0.0), 30}};
    const auto times = grid(2 * std::numbers::pi / omega, 60);
    const auto rec = decoherence_matrix(dephasing_branches({0.0, 1.0}, modes), free_bath(modes), fock_vacuum({30}), times);
    for (std::size_t i = 0; i < times.size(); ++i) CHECK(std::abs(rec.magnitude(0, 1, i) - oracle::displaced_overlap(g, omega, times[i])) <= 1e-8);
    // periodic: back to 1 after one period
    CHECK(std::abs(rec.magnitude(0, 1, times.size() - 1) - 1.0) <= 1e-8);
}

TEST_CASE("complex coupling and global phase of the initial state") {
    const double omega = 1.0;
    const cplx g(0.2, -0.25);
    const std::vector<BosonMode> modes{{omega, g, 30}};
    const auto times = grid(4.0, 20);
    const auto bd = dephasing_branches({0.0, 1.0}, modes);
    const auto a = decoherence_matrix(bd, free_bath(modes), fock_vacuum({30}), times);
    const auto b = decoherence_matrix(bd, free_bath(modes), Vector(cplx(0.6, 0.8) * fock_vacuum({30})), times);
    for (std::size_t i = 0; i < times.size(); ++i) {
        CHECK(std::abs(a.magnitude(0, 1, i) - oracle::displaced_overlap(std::abs(g), omega, times[i])) <= 1e-8);
        CHECK(std::abs(a.magnitude(0, 1, i) - b.magnitude(0, 1, i)) <= 1e-14);
    }
}

TEST_CASE("multi-mode overlap factorizes over modes") {
    const std::vector<BosonMode> modes{{1.0, cplx(0.2, 0.0), 12}, {1.7, cplx(0.15, 0.1), 12}};
    const auto times = grid(6.0, 30);
    const auto joint = decoherence_matrix(dephasing_branches({0.0, 1.0}, modes), free_bath(modes), fock_vacuum({12, 12}), times);
    const std::vector<BosonMode> m1{modes[0]}, m2{modes[1]};
    const auto r1 = decoherence_matrix(dephasing_branches({0.0, 1.0}, m1), free_bath(m1), fock_vacuum({12}), times);
    const auto r2 = decoherence_matrix(dephasing_branches({0.0, 1.0}, m2), free_bath(m2), fock_vacuum({12}), times);
    for (std::size_t i = 0; i < times.size(); ++i)
        CHECK(std::abs(joint.magnitude(0, 1, i) - r1.magnitude(0, 1, i) * r2.magnitude(0, 1, i)) <= 1e-10);
}

TEST_CASE("coupling-only generator differs from the full branch generator") {
    const std::vector<BosonMode> modes{{1.0, cplx(0.3, 0.0), 20}};
    const auto times = grid(3.0, 6);
    const auto bd = dephasing_branches({0.0, 1.0}, modes);
    const auto full = decoherence_matrix(bd, free_bath(modes), fock_vacuum({20}), times);
    const auto bare = decoherence_matrix(bd, free_bath(modes), fock_vacuum({20}), times, BranchGenerator::coupling_only);
    // without h_A the displaced branch spreads monotonically: |<0|e^{-i g x t}|0>| = e^{-g² t²/2}
    for (std::size_t i = 0; i < times.size(); ++i) CHECK(std::abs(bare.magnitude(0, 1, i) - std::exp(-0.09 * times[i] * times[i] / 2)) <= 1e-6);
    CHECK(std::abs(full.magnitude(0, 1, 6) - bare.magnitude(0, 1, 6)) > 1e-3);
}

TEST_CASE("orthogonality time") {
    const double omega = 1.0, g = 0.2;
    const std::vector<BosonMode> modes{{omega, cplx(g, 0.0), 20}};
    const auto times = grid(4 * std::numbers::pi, 200);
    const auto rec = decoherence_matrix(dephasing_branches({0.0, 1.0}, modes), free_bath(modes), fock_vacuum({20}), times);
    // floor of the closed form is e^{-2 g²/ω²} > 0.1
    CHECK(std::exp(-2 * g * g / (omega * omega)) > 0.1);
    CHECK_FALSE(orthogonality_time(rec, 0.1)[0].has_value());
    // threshold 1: t = 0 does not qualify, the next sample does
    const auto t1 = orthogonality_time(rec, 1.0)[0];
    REQUIRE(t1.has_value());
    CHECK(*t1 == times[1]);
    CHECK_THROWS_AS(orthogonality_time(rec, 0.0), DomainError);
    CHECK_THROWS_AS(orthogonality_time(rec, 1.5), DomainError);
}

TEST_CASE("many incommensurate modes reach orthogonality") {
    std::vector<BosonMode> modes;
    const double freqs[5] = {1.0, std::sqrt(2.0), std::sqrt(3.0), std::numbers::pi / 2, std::numbers::e / 2};
    for (double w : freqs) modes.push_back({w, cplx(0.45 * w, 0.0), 4});
    const auto times = grid(12.0, 240);
    const auto rec = decoherence_matrix(dephasing_branches({0.0, 1.0}, modes), free_bath(modes), fock_vacuum({4, 4, 4, 4, 4}), times);
    const auto tau = orthogonality_time(rec, 0.2)[0];
    REQUIRE(tau.has_value());
    // product of per-mode closed forms crosses 0.2 at the reported sample
    auto product = [&](double t) {
        double p = 1.0;
        for (const auto& m : modes) p *= oracle::displaced_overlap(std::abs(m.g), m.omega, t);
        return p;
    };
    std::optional<double> expected;
    for (double t : times)
        if (product(t) < 0.2) {
            expected = t;
            break;
        }
    REQUIRE(expected.has_value());
    CHECK(std::abs(*tau - *expected) <= times[1]);
}

TEST_CASE("input validation") {
    const std::vector<BosonMode> modes{{1.0, cplx(0.3, 0.0), 4}};
    const auto bd = dephasing_branches({0.0, 1.0}, modes);
    CHECK_THROWS_AS(decoherence_matrix(bd, free_bath(modes), fock_vacuum({5}), {0.0}), DimensionError);
    CHECK_THROWS_AS(decoherence_matrix(bd, free_bath(modes), Vector(2.0 * fock_vacuum({4})), {0.0}), DomainError);
}

}
