#pragma once

// Resonant multimode interaction model: an arrowhead matrix with the bare
// cavity modes on the diagonal and the qubit in the last row/column.

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "cqad/core.hpp"
#include "cqad/jacobi.hpp"

namespace cqad {

/// Signed qubit coupling to a mode: g0 sin(pi (label + offset) / 4 + phi_q),
/// scaled by the transverse ratio for transverse modes.
inline double coupling_strength(int label, ModeKind kind, const CouplingParams& c) {
    const double g = c.g0 * std::sin(kPi * (label + c.label_offset) / 4.0 + c.phi_q);
    return kind == ModeKind::transverse ? c.transverse_ratio * g : g;
}

struct InteractionMatrix {
    std::vector<double> diagonal;   // mode frequencies, then omega_q
    std::vector<double> couplings;  // one per mode

    std::size_t dimension() const { return diagonal.size(); }

    Eigen::MatrixXd dense() const {
        const auto n = static_cast<Eigen::Index>(diagonal.size());
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i) h(i, i) = diagonal[static_cast<std::size_t>(i)];
        for (Eigen::Index i = 0; i + 1 < n; ++i) {
            h(i, n - 1) = couplings[static_cast<std::size_t>(i)];
            h(n - 1, i) = couplings[static_cast<std::size_t>(i)];
        }
        return h;
    }
};

inline InteractionMatrix build_interaction(const AcousticModeSet& modes, const CouplingParams& c, double omega_q) {
    if (modes.empty()) throw ValidationError("build_interaction: mode set is empty");
    InteractionMatrix h;
    h.diagonal.reserve(modes.size() + 1);
    h.couplings.reserve(modes.size());
    for (const auto& m : modes.modes()) {
        h.diagonal.push_back(m.frequency);
        const int label = m.kind == ModeKind::transverse ? m.parent.value_or(m.label) : m.label;
        h.couplings.push_back(coupling_strength(label, m.kind, c));
    }
    h.diagonal.push_back(omega_q);
    return h;
}

struct EigenSystem {
    std::vector<double> eigenvalues;      // Hz, ascending
    Eigen::MatrixXd eigenvectors;         // column k: bare-basis coefficients of eigenmode k
    std::vector<double> qubit_participation;

    std::size_t dimension() const { return eigenvalues.size(); }
    /// Squared coefficient of bare state `bare` in eigenmode `k`.
    double participation(std::size_t bare, std::size_t k) const {
        const double c = eigenvectors(static_cast<Eigen::Index>(bare), static_cast<Eigen::Index>(k));
        return c * c;
    }
};

inline EigenSystem diagonalize(const Eigen::MatrixXd& h) {
    const SymmetricEigen se = jacobi_eigen(h);
    EigenSystem es;
    es.eigenvalues.assign(se.values.data(), se.values.data() + se.values.size());
    es.eigenvectors = se.vectors;
    const Eigen::Index last = h.rows() - 1;
    es.qubit_participation.resize(es.eigenvalues.size());
    for (Eigen::Index k = 0; k < h.rows(); ++k)
        es.qubit_participation[static_cast<std::size_t>(k)] = se.vectors(last, k) * se.vectors(last, k);
    return es;
}

inline EigenSystem diagonalize(const InteractionMatrix& h) {
    if (h.couplings.size() + 1 != h.diagonal.size()) throw ShapeError("interaction matrix: coupling count mismatch");
    return diagonalize(h.dense());
}

struct HybridRate {
    double kappa_ex = 0.0;
    double kappa_in = 0.0;
};

/// Loss rates of the hybridized eigenmodes.
///
/// kappa_ex'_k = kappa0 (sum_n a_n c_nk)^2 keeps the sign of every a_n so
/// that bright/dark interference survives; kappa_in'_k mixes the bare
/// internal losses and the qubit linewidth by participation.
inline std::vector<HybridRate> hybridized_rates(const EigenSystem& es, const AcousticModeSet& modes, double kappa0,
                                                double gamma) {
    if (es.dimension() != modes.size() + 1)
        throw ShapeError("hybridized_rates: eigensystem dimension " + std::to_string(es.dimension()) +
                         " does not match " + std::to_string(modes.size()) + " modes + qubit");
    const std::size_t n = modes.size();
    std::vector<HybridRate> out(es.dimension());
    for (std::size_t k = 0; k < es.dimension(); ++k) {
        double amp = 0.0, kin = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double c = es.eigenvectors(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
            amp += modes[i].external_amplitude * c;
            kin += modes[i].kappa_internal * c * c;
        }
        kin += gamma * es.qubit_participation[k];
        out[k] = {kappa0 * amp * amp, kin};
    }
    return out;
}

} // namespace cqad
