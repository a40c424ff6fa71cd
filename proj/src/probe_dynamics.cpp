#include "qprobe/probe_dynamics.hpp"

#include "qprobe/errors.hpp"

#include <cmath>
#include <sstream>

namespace qprobe {

std::size_t DecoherenceRecord::pair_index(std::size_t m, std::size_t n) const {
    if (m > n) std::swap(m, n);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        if (pairs[p].first == m && pairs[p].second == n) return p;
    }
    throw DimensionError("DecoherenceRecord: unknown branch pair");
}

double DecoherenceRecord::magnitude(std::size_t m, std::size_t n, std::size_t time_index) const {
    if (m >= branches || n >= branches || time_index >= times.size()) throw DimensionError("DecoherenceRecord: index out of range");
    if (m == n) return 1.0;
    return magnitudes[pair_index(m, n)][time_index];
}

Vector fock_vacuum(const std::vector<std::size_t>& app_dims) {
    std::size_t d = 1;
    for (auto f : app_dims) d *= f;
    Vector v = Vector::Zero(static_cast<Eigen::Index>(d));
    v(0) = 1.0;
    return v;
}

Matrix propagator(const SpectralDecomposition& sd, double t) {
    const Vector phases = (sd.eigenvalues.cast<cplx>() * cplx(0.0, -t)).array().exp().matrix();
    return sd.eigenvectors * phases.asDiagonal() * sd.eigenvectors.adjoint();
}

DecoherenceRecord decoherence_matrix(const BranchDecomposition& branches, const Matrix& h_apparatus, const Vector& initial,
                                     const std::vector<double>& times, BranchGenerator generator) {
    const auto nb = branches.branch_hamiltonians.size();
    if (nb == 0) throw DimensionError("decoherence_matrix: no branches");
    const Eigen::Index na = initial.size();
    if (h_apparatus.rows() != na) throw DimensionError("decoherence_matrix: initial state / apparatus dimension mismatch");
    const double norm = initial.norm();
    if (std::abs(norm - 1.0) > 1e-12) {
        std::ostringstream msg;
        msg << "decoherence_matrix: initial apparatus state must be normalized (norm " << norm << ")";
        throw DomainError(msg.str());
    }

    // Per branch: |D_n(t)> = U e^{-iλt} U† |D>; keep c = U†|D>.
    std::vector<SpectralDecomposition> spectra;
    std::vector<Vector> coeffs;
    spectra.reserve(nb);
    for (const auto& h : branches.branch_hamiltonians) {
        if (h.rows() != na) throw DimensionError("decoherence_matrix: branch dimension mismatch");
        spectra.push_back(eig_hermitian(generator == BranchGenerator::full_branch ? Matrix(h_apparatus + h) : h));
        coeffs.push_back(spectra.back().eigenvectors.adjoint() * initial);
    }

    DecoherenceRecord rec;
    rec.times = times;
    rec.branches = nb;
    for (std::size_t m = 0; m < nb; ++m) {
        for (std::size_t n = m + 1; n < nb; ++n) rec.pairs.emplace_back(m, n);
    }
    rec.magnitudes.assign(rec.pairs.size(), std::vector<double>(times.size(), 0.0));

    std::vector<Vector> states(nb);
    for (std::size_t ti = 0; ti < times.size(); ++ti) {
        const double t = times[ti];
        for (std::size_t n = 0; n < nb; ++n) {
            const Vector phased = (spectra[n].eigenvalues.cast<cplx>() * cplx(0.0, -t)).array().exp().matrix().cwiseProduct(coeffs[n]);
            states[n] = spectra[n].eigenvectors * phased;
        }
        for (std::size_t p = 0; p < rec.pairs.size(); ++p) {
            rec.magnitudes[p][ti] = std::abs(states[rec.pairs[p].first].dot(states[rec.pairs[p].second]));
        }
    }
    return rec;
}

std::vector<std::optional<double>> orthogonality_time(const DecoherenceRecord& record, double threshold) {
    if (!(threshold > 0.0) || threshold > 1.0) throw DomainError("orthogonality_time: threshold must lie in (0, 1]");
    std::vector<std::optional<double>> out(record.pairs.size());
    for (std::size_t p = 0; p < record.pairs.size(); ++p) {
        for (std::size_t ti = 0; ti < record.times.size(); ++ti) {
            if (record.magnitudes[p][ti] < threshold) {
                out[p] = record.times[ti];
                break;
            }
        }
    }
    return out;
}

} // namespace qprobe
