#include "qprobe/models.hpp"

#include "qprobe/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace qprobe {

std::vector<std::size_t> ApparatusSpec::dims() const {
    std::vector<std::size_t> d;
    d.reserve(modes.size());
    for (const auto& m : modes) d.push_back(m.n_trunc);
    return d;
}

void validate(const SystemSpec& sys) {
    if (sys.kind == SystemKind::two_level) {
        if (!(sys.delta > 0.0) || !std::isfinite(sys.delta)) throw ConfigError("system.delta: two-level spacing must be > 0");
    } else {
        if (!(sys.omega > 0.0) || !std::isfinite(sys.omega)) throw ConfigError("system.omega: oscillator frequency must be > 0");
        if (sys.levels < 2) throw ConfigError("system.levels: oscillator truncation must be >= 2");
    }
}

void validate(const ApparatusSpec& app) {
    if (app.kind == ApparatusKind::single_cavity && app.modes.size() != 1) {
        throw ConfigError("apparatus.cavity: single_cavity apparatus needs exactly one mode");
    }
    for (std::size_t k = 0; k < app.modes.size(); ++k) {
        const auto& m = app.modes[k];
        const std::string key = "apparatus.mode." + std::to_string(k + 1);
        if (!(m.omega > 0.0) || !std::isfinite(m.omega)) throw ConfigError(key + ".omega: mode frequency must be > 0");
        if (!std::isfinite(m.g.real()) || !std::isfinite(m.g.imag())) throw ConfigError(key + ".g: coupling must be finite");
        if (m.n_trunc < 2) throw ConfigError(key + ".n_trunc: truncation must be >= 2");
    }
}

void validate(const SystemSpec& sys, const ApparatusSpec& app, const CouplingSpec& cpl) {
    validate(sys);
    validate(app);
    if (cpl.kind == CouplingKind::dipole) {
        if (sys.kind != SystemKind::two_level || app.kind != ApparatusKind::single_cavity) {
            throw ConfigError("coupling.kind: dipole coupling requires a two_level system and a single_cavity apparatus");
        }
    }
    if (cpl.kind == CouplingKind::dephasing && cpl.lambda_rule == LambdaRule::explicit_list) {
        if (cpl.lambda_values.size() != sys.dim()) {
            throw ConfigError("coupling.lambda.values: expected one value per system level (" + std::to_string(sys.dim()) + ")");
        }
        for (double l : cpl.lambda_values) {
            if (!std::isfinite(l)) throw ConfigError("coupling.lambda.values: values must be finite");
        }
    }
}

RealVector system_energies(const SystemSpec& sys) {
    validate(sys);
    if (sys.kind == SystemKind::two_level) {
        RealVector e(2);
        e << 0.0, sys.delta;
        return e;
    }
    RealVector e(static_cast<Eigen::Index>(sys.levels));
    for (std::size_t n = 0; n < sys.levels; ++n) e(static_cast<Eigen::Index>(n)) = (static_cast<double>(n) + 0.5) * sys.omega;
    return e;
}

std::vector<double> coupling_lambdas(const SystemSpec& sys, const CouplingSpec& cpl) {
    if (cpl.lambda_rule == LambdaRule::explicit_list) return cpl.lambda_values;
    std::vector<double> l(sys.dim());
    for (std::size_t n = 0; n < l.size(); ++n) l[n] = std::sqrt(static_cast<double>(n));
    return l;
}

Matrix annihilation(std::size_t n_trunc) {
    Matrix b = Matrix::Zero(static_cast<Eigen::Index>(n_trunc), static_cast<Eigen::Index>(n_trunc));
    for (std::size_t n = 1; n < n_trunc; ++n) {
        b(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(n)) = std::sqrt(static_cast<double>(n));
    }
    return b;
}

Matrix number_operator(std::size_t n_trunc) {
    Matrix n = Matrix::Zero(static_cast<Eigen::Index>(n_trunc), static_cast<Eigen::Index>(n_trunc));
    for (std::size_t k = 0; k < n_trunc; ++k) n(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = static_cast<double>(k);
    return n;
}

ModelOperators build_total_hamiltonian(const SystemSpec& sys, const ApparatusSpec& app_in, const CouplingSpec& cpl,
                                       std::size_t dimension_cap, std::size_t padding) {
    validate(sys, app_in, cpl);
    ApparatusSpec app = app_in;
    for (auto& m : app.modes) m.n_trunc += padding;

    ModelOperators ops;
    ops.space = ProductSpace(sys.dim(), app.dims());
    if (ops.space.total_dim() > dimension_cap) {
        std::ostringstream msg;
        msg << "build_total_hamiltonian: total dimension " << ops.space.total_dim() << " exceeds cap " << dimension_cap;
        throw ResourceError(msg.str());
    }

    ops.energies = system_energies(sys);
    ops.h_system = ops.energies.cast<cplx>().asDiagonal();

    const auto dims = app.dims();
    const std::size_t na = ops.space.app_dim();
    ops.h_apparatus = Matrix::Zero(static_cast<Eigen::Index>(na), static_cast<Eigen::Index>(na));
    Matrix field = Matrix::Zero(static_cast<Eigen::Index>(na), static_cast<Eigen::Index>(na));  // Σ_k g_k b_k† + h.c.
    Matrix lowering = field;                                                                     // Σ_k g_k b_k (cavity)
    for (std::size_t k = 0; k < app.modes.size(); ++k) {
        const auto& m = app.modes[k];
        const Matrix b = embed_mode(annihilation(m.n_trunc), k, dims);
        ops.h_apparatus += m.omega * embed_mode(number_operator(m.n_trunc), k, dims);
        field += m.g * b.adjoint() + std::conj(m.g) * b;
        lowering += m.g * b;
    }

    const Matrix id_s = identity(sys.dim());
    const Matrix id_a = identity(na);
    ops.H_S = tensor(ops.h_system, id_a);
    ops.H_A = tensor(id_s, ops.h_apparatus);

    if (cpl.kind == CouplingKind::dephasing) {
        const auto lambdas = coupling_lambdas(sys, cpl);
        RealVector lv(static_cast<Eigen::Index>(lambdas.size()));
        for (std::size_t n = 0; n < lambdas.size(); ++n) lv(static_cast<Eigen::Index>(n)) = lambdas[n];
        ops.V_AS = tensor(Matrix(lv.cast<cplx>().asDiagonal()), field);
    } else {
        // |g> = index 0, |e> = index 1; σ+ = |e><g|.
        Matrix sigma_plus = Matrix::Zero(2, 2);
        sigma_plus(1, 0) = 1.0;
        const Matrix sigma_minus = sigma_plus.adjoint();
        if (cpl.rotating_wave) {
            ops.V_AS = tensor(sigma_plus, lowering) + tensor(sigma_minus, lowering.adjoint());
        } else {
            ops.V_AS = tensor(sigma_plus + sigma_minus, lowering + lowering.adjoint());
        }
    }
    return ops;
}

SpectralDensityReport spectral_density_check(const Matrix& h_system, const Matrix& h_apparatus,
                                             std::size_t band_width, double ratio_threshold) {
    const RealVector es = eig_hermitian(h_system).eigenvalues;
    const RealVector ea = eig_hermitian(h_apparatus).eigenvalues;
    if (band_width == 0 || band_width >= static_cast<std::size_t>(es.size())) {
        throw ConfigError("spectral_density_check: band width M must satisfy 1 <= M < system dimension");
    }
    SpectralDensityReport r;
    r.min_system_gap = std::numeric_limits<double>::infinity();
    const auto M = static_cast<Eigen::Index>(band_width);
    for (Eigen::Index n = 0; n + M < es.size(); ++n) r.min_system_gap = std::min(r.min_system_gap, std::abs(es(n + M) - es(n)));
    for (Eigen::Index k = 0; k + 1 < ea.size(); ++k) r.max_apparatus_gap = std::max(r.max_apparatus_gap, std::abs(ea(k + 1) - ea(k)));

    const double scale = std::max(1.0, es.cwiseAbs().maxCoeff());
    r.degenerate_system = r.min_system_gap <= 1e-12 * scale;
    r.ratio = r.max_apparatus_gap > 0.0 ? r.min_system_gap / r.max_apparatus_gap : std::numeric_limits<double>::infinity();
    r.passed = !r.degenerate_system && r.ratio >= ratio_threshold;
    return r;
}

double self_energy(const ApparatusSpec& app) {
    double eps = 0.0;
    for (const auto& m : app.modes) eps += std::norm(m.g) / m.omega;
    return eps;
}

namespace {

double mode_partition(double omega, std::size_t n_trunc, double beta) {
    double z = 0.0;
    for (std::size_t n = 0; n < n_trunc; ++n) z += std::exp(-beta * omega * static_cast<double>(n));
    return z;
}

} // namespace

double apparatus_partition_function(const ApparatusSpec& app, double beta) {
    double z = 1.0;
    for (const auto& m : app.modes) z *= mode_partition(m.omega, m.n_trunc, beta);
    return z;
}

TruncationGate truncation_gate(const ApparatusSpec& app, double beta, double tol) {
    TruncationGate gate;
    gate.partition_function = apparatus_partition_function(app, beta);
    for (std::size_t k = 0; k < app.modes.size(); ++k) {
        ApparatusSpec doubled = app;
        doubled.modes[k].n_trunc *= 2;
        gate.max_change = std::max(gate.max_change, std::abs(apparatus_partition_function(doubled, beta) - gate.partition_function));
    }
    gate.converged = gate.max_change < tol;
    return gate;
}

} // namespace qprobe
