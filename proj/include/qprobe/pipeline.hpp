// pipeline.hpp — scenario analysis, parameter sweeps and their text output.

#pragma once

#include "qprobe/models.hpp"
#include "qprobe/scenario.hpp"
#include "qprobe/thermo.hpp"

#include <optional>
#include <string>

namespace qprobe {

struct RunReport {
    ThermalAnalysis analysis;
    RealVector energies;
    double self_energy{0.0};
    double generator_residual{0.0};
    double offdiag_leakage{0.0};
    double nondemolition_residual{0.0};
    TruncationGate truncation;
    std::optional<SpectralDensityReport> density;
    std::optional<TlsAnalysis> tls;  // dispersive two-level/cavity route only
};

// Dephasing (and full-Rabi dipole) scenarios go through the FN transform and
// per-branch formal factors; rotating-wave dipole scenarios use the dispersive
// two-level/cavity factors. The FN step is run on a model with
// analysis.fock_padding extra levels per mode and restricted back afterwards.
RunReport analyze(const Scenario& s);

// `key = value` lines, vectors comma separated, absent optionals as `none`.
std::string format_report(const RunReport& r);

enum class SweepAxis { lambda, delta_T, g, beta };

SweepAxis parse_axis(const std::string& name);

// CSV (LF, header first, ascending axis order). Throws ConfigError when the
// axis does not fit the scenario or its grid is missing.
std::string sweep_csv(const Scenario& s, SweepAxis axis);

} // namespace qprobe
