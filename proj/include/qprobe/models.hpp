// models.hpp — declarative system / apparatus / coupling specs and the
// operators they generate on a ProductSpace.

#pragma once

#include "qprobe/operator_core.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace qprobe {

inline constexpr std::size_t kDefaultTruncation = 12;
inline constexpr std::size_t kDefaultDimensionCap = 4096;

enum class SystemKind { two_level, truncated_oscillator };
enum class ApparatusKind { boson_bath, single_cavity };
enum class CouplingKind { dephasing, dipole };
enum class LambdaRule { explicit_list, sqrt_n };

struct SystemSpec {
    SystemKind kind{SystemKind::two_level};
    double delta{1.0};       // two-level spacing
    double omega{1.0};       // oscillator frequency
    std::size_t levels{2};   // oscillator truncation (two-level: always 2)

    std::size_t dim() const { return kind == SystemKind::two_level ? 2 : levels; }
    bool operator==(const SystemSpec&) const = default;
};

struct BosonMode {
    double omega{1.0};
    cplx g{0.0, 0.0};
    std::size_t n_trunc{kDefaultTruncation};

    bool operator==(const BosonMode&) const = default;
};

struct ApparatusSpec {
    ApparatusKind kind{ApparatusKind::boson_bath};
    std::vector<BosonMode> modes;  // single_cavity: exactly one entry

    std::vector<std::size_t> dims() const;
    bool operator==(const ApparatusSpec&) const = default;
};

struct CouplingSpec {
    CouplingKind kind{CouplingKind::dephasing};
    LambdaRule lambda_rule{LambdaRule::sqrt_n};
    std::vector<double> lambda_values;  // explicit_list only
    bool rotating_wave{true};           // dipole only; false selects full Rabi coupling

    bool operator==(const CouplingSpec&) const = default;
};

void validate(const SystemSpec& sys);
void validate(const ApparatusSpec& app);
void validate(const SystemSpec& sys, const ApparatusSpec& app, const CouplingSpec& cpl);

// Bare energies E_n, ascending; oscillator levels carry the (n + 1/2)ω zero point.
RealVector system_energies(const SystemSpec& sys);
// λ_n for every system level.
std::vector<double> coupling_lambdas(const SystemSpec& sys, const CouplingSpec& cpl);

Matrix annihilation(std::size_t n_trunc);
Matrix number_operator(std::size_t n_trunc);

struct ModelOperators {
    ProductSpace space;
    RealVector energies;   // E_n
    Matrix h_system;       // on the system factor
    Matrix h_apparatus;    // on the apparatus factor
    Matrix H_S;            // h_system ⊗ 1
    Matrix H_A;            // 1 ⊗ h_apparatus
    Matrix V_AS;
};

// `padding` extra Fock levels are added to every mode (used to keep
// second-order products exact on the retained levels).
ModelOperators build_total_hamiltonian(const SystemSpec& sys, const ApparatusSpec& app, const CouplingSpec& cpl,
                                       std::size_t dimension_cap = kDefaultDimensionCap, std::size_t padding = 0);

struct SpectralDensityReport {
    double min_system_gap{0.0};       // min_n |E_{n+M} - E_n|
    double max_apparatus_gap{0.0};    // max_k |ε_{k+1} - ε_k|
    double ratio{0.0};
    bool passed{false};
    bool degenerate_system{false};
};

// Checks that the apparatus spectrum is denser than the system's band of M levels.
SpectralDensityReport spectral_density_check(const Matrix& h_system, const Matrix& h_apparatus,
                                             std::size_t band_width, double ratio_threshold);

// ε = Σ_k |g_k|^2 / ω_k
double self_energy(const ApparatusSpec& app);

// Tr e^{-β h_A} for the truncated free apparatus.
double apparatus_partition_function(const ApparatusSpec& app, double beta);

struct TruncationGate {
    double partition_function{0.0};
    double max_change{0.0};   // largest |ΔZ_A| when one mode's truncation is doubled
    bool converged{false};
};

TruncationGate truncation_gate(const ApparatusSpec& app, double beta, double tol = 1e-8);

} // namespace qprobe
