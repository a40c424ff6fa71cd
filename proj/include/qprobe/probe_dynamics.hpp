// probe_dynamics.hpp — branch-conditioned apparatus evolution during the
// pre-measurement window and the resulting decoherence factors.

#pragma once

#include "qprobe/fn_transform.hpp"
#include "qprobe/operator_core.hpp"

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace qprobe {

enum class BranchGenerator {
    full_branch,     // |D_n(t)> = exp[-i(h_A + H(n))t] |D>
    coupling_only,   // |D_n(t)> = exp[-i H(n) t] |D>
};

struct DecoherenceRecord {
    std::vector<double> times;
    std::size_t branches{0};
    std::vector<std::pair<std::size_t, std::size_t>> pairs;  // m < n
    std::vector<std::vector<double>> magnitudes;             // [pair][time]

    // |<D_m(t_i)|D_n(t_i)>|; exactly 1 on the diagonal.
    double magnitude(std::size_t m, std::size_t n, std::size_t time_index) const;
    std::size_t pair_index(std::size_t m, std::size_t n) const;
};

Vector fock_vacuum(const std::vector<std::size_t>& app_dims);

// exp(-i K t) for Hermitian K.
Matrix propagator(const SpectralDecomposition& sd, double t);

DecoherenceRecord decoherence_matrix(const BranchDecomposition& branches, const Matrix& h_apparatus, const Vector& initial,
                                     const std::vector<double>& times,
                                     BranchGenerator generator = BranchGenerator::full_branch);

// First sampled time with overlap strictly below `threshold`, per pair.
std::vector<std::optional<double>> orthogonality_time(const DecoherenceRecord& record, double threshold);

} // namespace qprobe
