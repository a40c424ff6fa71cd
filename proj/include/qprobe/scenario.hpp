// scenario.hpp — the flat `key = value` scenario format read by the CLI.
//
// One assignment per line, `#` starts a comment, keys are dotted paths.
// Unknown, duplicated or kind-inapplicable keys are rejected; every error
// names the offending key. The full schema is in README.md.

#pragma once

#include "qprobe/models.hpp"
#include "qprobe/thermo.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace qprobe {

struct AnalysisOptions {
    double beta_eff_tol{kBetaEffTol};
    std::size_t max_dim{kDefaultDimensionCap};
    std::optional<double> degeneracy_tol;  // absolute; default 1e-9 × spectral range
    std::size_t fock_padding{1};
    std::size_t tls_max_terms{0};          // 0 = adaptive
    bool delta_u_unnormalized{false};
    std::optional<std::size_t> density_band;
    std::optional<double> density_ratio;

    bool operator==(const AnalysisOptions&) const = default;
};

struct SweepGrids {
    std::optional<std::vector<double>> lambda;
    std::optional<std::vector<double>> g;
    std::optional<std::vector<double>> beta;

    bool operator==(const SweepGrids&) const = default;
};

struct Scenario {
    SystemSpec system;
    ApparatusSpec apparatus;
    CouplingSpec coupling;
    double beta{1.0};
    AnalysisOptions analysis;
    SweepGrids sweep;

    bool operator==(const Scenario&) const = default;
};

Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);
std::string serialize_scenario(const Scenario& s);

// 17 significant digits, `.` separator, independent of the global locale.
std::string format_real(double x);

// `start:stop:count` (inclusive linspace) or a comma-separated list; the
// result is sorted ascending and must contain at least two distinct values.
std::vector<double> parse_grid(const std::string& key, const std::string& value);

} // namespace qprobe
