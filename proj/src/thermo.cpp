#include "qprobe/thermo.hpp"

#include "qprobe/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace qprobe {

namespace {

void require_beta(double beta, const char* what) {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        std::ostringstream msg;
        msg << what << ": inverse temperature must be finite and > 0 (got " << beta << ")";
        throw DomainError(msg.str());
    }
}

void require_positive_xi(const std::vector<double>& xi, const char* what) {
    for (std::size_t n = 0; n < xi.size(); ++n) {
        if (!(xi[n] > 0.0) || !std::isfinite(xi[n])) {
            std::ostringstream msg;
            msg << what << ": formal factor xi(" << n << ") must be finite and > 0 (got " << xi[n] << ")";
            throw DomainError(msg.str());
        }
    }
}

double level_gap(const RealVector& energies, std::size_t n, const char* what) {
    const double gap = energies(static_cast<Eigen::Index>(n + 1)) - energies(static_cast<Eigen::Index>(n));
    if (!(gap > 0.0)) {
        std::ostringstream msg;
        msg << what << ": levels " << n << " and " << n + 1 << " are degenerate or misordered (gap " << gap << ")";
        throw DomainError(msg.str());
    }
    return gap;
}

// log Σ_i e^{-β x_i}
double log_boltzmann_sum(const RealVector& x, double beta) {
    const double x0 = x.minCoeff();
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) s += std::exp(-beta * (x(i) - x0));
    return -beta * x0 + std::log(s);
}

// Eq.-17 form with log ξ as input; both sums shifted so the largest weight is 1.
double fidelity_from_log_xi(double beta, const RealVector& energies, const std::vector<double>& log_xi) {
    const double e0 = energies.minCoeff();
    const double lmax = *std::max_element(log_xi.begin(), log_xi.end());
    double num = 0.0, z = 0.0, zmod = 0.0;
    for (Eigen::Index n = 0; n < energies.size(); ++n) {
        const double p = std::exp(-beta * (energies(n) - e0));
        const double r = std::exp(log_xi[static_cast<std::size_t>(n)] - lmax);
        num += p * std::sqrt(r);
        z += p;
        zmod += p * r;
    }
    return num / (std::sqrt(z) * std::sqrt(zmod));
}

// log sinh(x) for x > 0
double log_sinh(double x) { return x + std::log1p(-std::exp(-2.0 * x)) - std::log(2.0); }

void require_oscillator_args(double beta, double omega, double lambda, const char* what) {
    require_beta(beta, what);
    if (!(omega > 0.0)) throw DomainError(std::string(what) + ": omega must be > 0");
    if (!(lambda >= 0.0) || !(lambda < omega)) {
        std::ostringstream msg;
        msg << what << ": level shift lambda = " << lambda << " must satisfy 0 <= lambda < omega = " << omega;
        throw DomainError(msg.str());
    }
}

} // namespace

Matrix gibbs_state(const Matrix& H, double beta) {
    require_beta(beta, "gibbs_state");
    const auto sd = eig_hermitian(H);
    const double e0 = sd.eigenvalues.minCoeff();
    Matrix rho = func_of_hermitian(sd, [&](double e) { return std::exp(-beta * (e - e0)); });
    return rho / rho.trace().real();
}

Matrix reduced_system_state(const Matrix& H_total, double beta, const ProductSpace& space) {
    if (H_total.rows() != static_cast<Eigen::Index>(space.total_dim())) throw DimensionError("reduced_system_state: operator does not live on the product space");
    Matrix rho = partial_trace_system(gibbs_state(H_total, beta), space);
    rho = hermitian_part(rho);
    return rho / rho.trace().real();
}

std::vector<double> formal_factors(const Matrix& H_A, const Matrix& V_eff, double beta, const ProductSpace& space,
                                   double leakage_tol) {
    require_beta(beta, "formal_factors");
    const auto veff = branch_decompose(V_eff, space);
    if (veff.offdiag_leakage > leakage_tol) {
        std::ostringstream msg;
        msg << "formal_factors: V_eff is not block diagonal in the system index (leakage " << veff.offdiag_leakage
            << " > " << leakage_tol << "); apply the FN transform first";
        throw DomainError(msg.str());
    }
    const auto ha = branch_decompose(H_A, space);
    if (ha.offdiag_leakage > leakage_tol) throw DomainError("formal_factors: H_A must act on the apparatus factor only");

    std::vector<double> xi(space.sys_dim);
    for (std::size_t n = 0; n < space.sys_dim; ++n) {
        const Matrix branch = ha.branch_hamiltonians[n] + veff.branch_hamiltonians[n];
        const double log_xi = log_boltzmann_sum(eig_hermitian(branch).eigenvalues, beta);
        xi[n] = std::exp(log_xi);
        if (!std::isfinite(xi[n]) || xi[n] == 0.0) {
            std::ostringstream msg;
            msg << "formal_factors: xi(" << n << ") = exp(" << log_xi << ") is outside the double range";
            throw OverflowError(msg.str());
        }
    }
    return xi;
}

std::vector<double> generalized_beta_profile(const std::vector<double>& xi, const RealVector& energies, double beta) {
    if (xi.size() != static_cast<std::size_t>(energies.size()) || xi.size() < 2) {
        throw DimensionError("generalized_beta_profile: need one xi per level and at least two levels");
    }
    require_positive_xi(xi, "generalized_beta_profile");
    std::vector<double> out(xi.size() - 1);
    for (std::size_t n = 0; n + 1 < xi.size(); ++n) {
        out[n] = beta + std::log(xi[n] / xi[n + 1]) / level_gap(energies, n, "generalized_beta_profile");
    }
    return out;
}

std::vector<double> beta_profile_from_populations(const std::vector<double>& populations, const RealVector& energies) {
    if (populations.size() != static_cast<std::size_t>(energies.size()) || populations.size() < 2) {
        throw DimensionError("beta_profile_from_populations: need one population per level and at least two levels");
    }
    require_positive_xi(populations, "beta_profile_from_populations");
    std::vector<double> out(populations.size() - 1);
    for (std::size_t n = 0; n + 1 < populations.size(); ++n) {
        out[n] = std::log(populations[n] / populations[n + 1]) / level_gap(energies, n, "beta_profile_from_populations");
    }
    return out;
}

std::vector<double> ratio_condition_residuals(const std::vector<double>& xi, const RealVector& energies) {
    if (xi.size() != static_cast<std::size_t>(energies.size())) throw DimensionError("ratio_condition_residuals: need one xi per level");
    require_positive_xi(xi, "ratio_condition_residuals");
    std::vector<double> out;
    for (std::size_t n = 0; n + 2 < xi.size(); ++n) {
        const double d0 = level_gap(energies, n, "ratio_condition_residuals");
        const double d1 = level_gap(energies, n + 1, "ratio_condition_residuals");
        out.push_back(d0 * std::log(xi[n + 1] / xi[n + 2]) - d1 * std::log(xi[n] / xi[n + 1]));
    }
    return out;
}

std::optional<double> effective_beta(const std::vector<double>& beta_profile, double tol) {
    if (beta_profile.empty()) throw DomainError("effective_beta: empty beta profile");
    double mean = 0.0;
    for (double b : beta_profile) mean += b;
    mean /= static_cast<double>(beta_profile.size());
    double dev = 0.0;
    for (double b : beta_profile) dev = std::max(dev, std::abs(b - mean));
    if (dev <= tol * std::max(1.0, std::abs(mean))) return mean;
    return std::nullopt;
}

std::vector<double> dephasing_beta_closed_form(const std::vector<double>& lambdas, const RealVector& energies,
                                               double eps, double beta) {
    if (lambdas.size() != static_cast<std::size_t>(energies.size()) || lambdas.size() < 2) {
        throw DimensionError("dephasing_beta_closed_form: need one lambda per level and at least two levels");
    }
    std::vector<double> out(lambdas.size() - 1);
    for (std::size_t n = 0; n + 1 < lambdas.size(); ++n) {
        const double dl = lambdas[n + 1] * lambdas[n + 1] - lambdas[n] * lambdas[n];
        out[n] = beta * (1.0 - dl / level_gap(energies, n, "dephasing_beta_closed_form") * eps);
    }
    return out;
}

std::vector<double> level_shifts_from_xi(const std::vector<double>& xi, double beta) {
    require_beta(beta, "level_shifts_from_xi");
    require_positive_xi(xi, "level_shifts_from_xi");
    std::vector<double> out(xi.size());
    for (std::size_t n = 0; n < xi.size(); ++n) out[n] = -std::log(xi[n]) / beta;
    return out;
}

Matrix modified_thermal_state(const RealVector& energies, const std::vector<double>& xi, double beta) {
    require_beta(beta, "modified_thermal_state");
    if (xi.size() != static_cast<std::size_t>(energies.size())) throw DimensionError("modified_thermal_state: need one xi per level");
    require_positive_xi(xi, "modified_thermal_state");
    RealVector logw(energies.size());
    for (Eigen::Index n = 0; n < energies.size(); ++n) logw(n) = -beta * energies(n) + std::log(xi[static_cast<std::size_t>(n)]);
    const double top = logw.maxCoeff();
    RealVector w = (logw.array() - top).exp().matrix();
    w /= w.sum();
    return w.cast<cplx>().asDiagonal();
}

double inner_energy_change(const Matrix& rho_S, double beta, const Matrix& h_system) {
    if (rho_S.rows() != h_system.rows() || rho_S.cols() != h_system.cols()) throw DimensionError("inner_energy_change: dimension mismatch");
    const Matrix rho_can = gibbs_state(h_system, beta);
    return (h_system * rho_S).trace().real() - (h_system * rho_can).trace().real();
}

double inner_energy_change_unnormalized(const RealVector& energies, double beta, double beta_eff) {
    double du = 0.0;
    for (Eigen::Index n = 0; n < energies.size(); ++n) {
        du += energies(n) * (std::exp(-beta_eff * energies(n)) - std::exp(-beta * energies(n)));
    }
    return du;
}

double tls_temperature_decrease(double xi_g, double xi_e, double delta, double beta) {
    require_beta(beta, "tls_temperature_decrease");
    if (!(delta > 0.0)) throw DomainError("tls_temperature_decrease: level spacing must be > 0");
    require_positive_xi({xi_g, xi_e}, "tls_temperature_decrease");
    const double x = std::log(xi_g / xi_e) / delta;
    return x / (beta + x) * (1.0 / beta);
}

TlsAnalysis tls_analysis(double omega_b, cplx g, double delta, double beta, std::size_t max_terms) {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("tls_analysis: sum does not converge for beta <= 0");
    if (!(delta > 0.0)) throw DomainError("tls_analysis: level spacing delta must be > 0");
    if (!(omega_b > 0.0)) throw DomainError("tls_analysis: cavity frequency must be > 0");
    if (omega_b == delta) throw DomainError("tls_analysis: resonant cavity (omega_b == delta) has no dispersive limit");
    if (omega_b < delta) throw DomainError("tls_analysis: dispersive formulas assume omega_b > delta");

    TlsAnalysis r;
    r.chi = std::norm(g) / (omega_b - delta);
    r.weak_detuning = omega_b < 10.0 * delta;
    const double rate = beta * (omega_b + r.chi);
    if (!(rate > 0.0)) throw DomainError("tls_analysis: sum does not converge (beta (omega_b + chi) <= 0)");

    const double q = std::exp(-rate);
    const std::size_t cap = max_terms ? max_terms : 10'000'000;
    bool converged = false;
    for (std::size_t n = 0; n < cap; ++n) {
        const double nd = static_cast<double>(n);
        r.xi_e += std::exp(-beta * (omega_b * nd + r.chi * (nd + 1.0)));
        r.xi_g += std::exp(-beta * (omega_b * nd + r.chi * nd));
        r.terms = n + 1;
        const double tail = std::exp(-rate * (nd + 1.0)) / (1.0 - q);
        if (tail < 1e-14 * r.xi_g) {
            converged = true;
            break;
        }
    }
    if (!converged) throw DomainError("tls_analysis: series did not reach the 1e-14 tail bound within the term cap");

    r.beta_eff = beta + std::log(r.xi_g / r.xi_e) / delta;
    r.delta_T = tls_temperature_decrease(r.xi_g, r.xi_e, delta, beta);
    if (g != cplx(0.0) && !(r.xi_g > r.xi_e)) throw std::logic_error("tls_analysis: expected xi_g > xi_e for nonzero coupling");
    return r;
}

double bhattacharyya(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size() || p.empty()) throw DimensionError("bhattacharyya: distributions must have equal nonzero length");
    double sp = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        sp += p[i];
        sq += q[i];
    }
    double f = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) f += std::sqrt((p[i] / sp) * (q[i] / sq));
    return f;
}

double fidelity_general(double beta, const RealVector& energies, const std::vector<double>& xi) {
    require_beta(beta, "fidelity_general");
    if (xi.size() != static_cast<std::size_t>(energies.size()) || xi.empty()) throw DimensionError("fidelity_general: need one xi per level");
    require_positive_xi(xi, "fidelity_general");
    std::vector<double> log_xi(xi.size());
    for (std::size_t n = 0; n < xi.size(); ++n) log_xi[n] = std::log(xi[n]);
    return fidelity_from_log_xi(beta, energies, log_xi);
}

double fidelity_oscillator_closed_form(double beta, double omega, double lambda) {
    require_oscillator_args(beta, omega, lambda, "fidelity_oscillator_closed_form");
    if (lambda == 0.0) return 1.0;
    const double a = log_sinh(beta * omega / 2.0);
    const double b = log_sinh(beta * (omega - lambda) / 2.0);
    const double c = log_sinh(beta * (omega - lambda / 2.0) / 2.0);
    return std::exp(0.5 * (a + b) - c);
}

double fidelity_oscillator_series(double beta, double omega, double lambda) {
    require_oscillator_args(beta, omega, lambda, "fidelity_oscillator_series");
    // Slowest-decaying weight is e^{-β(ω-λ)n}.
    const double decay = beta * (omega - lambda);
    const double needed = std::ceil(std::log(1e16) / decay) + 1.0;
    if (needed > 1e7) throw ResourceError("fidelity_oscillator_series: level shift too close to omega for a truncated series");
    const auto levels = static_cast<Eigen::Index>(needed);
    RealVector energies(levels);
    std::vector<double> log_xi(static_cast<std::size_t>(levels));
    for (Eigen::Index n = 0; n < levels; ++n) {
        energies(n) = (static_cast<double>(n) + 0.5) * omega;
        log_xi[static_cast<std::size_t>(n)] = beta * lambda * static_cast<double>(n);
    }
    return fidelity_from_log_xi(beta, energies, log_xi);
}

double temperature_shift_oscillator(double beta, double omega, double lambda) {
    require_oscillator_args(beta, omega, lambda, "temperature_shift_oscillator");
    if (lambda == 0.0) return 0.0;
    return 1.0 / (beta * (omega / lambda - 1.0));
}

} // namespace qprobe
