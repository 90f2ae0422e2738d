#pragma once

// Transmon (several levels) coupled to one cavity mode. The Hamiltonian
// conserves total excitation number n, so it is diagonalized block by block;
// dressed states are labelled |i phonons, j transmon> by maximum overlap.

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "cqad/core.hpp"
#include "cqad/jacobi.hpp"

namespace cqad {

struct JCParams {
    double omega_q = 4.0e9;     // Hz
    double omega_cav = 4.2626e9; // Hz
    double g = 6.48e6;          // Hz
    double alpha = 273e6;       // Hz, positive magnitude
    int levels = 4;
    int n_max = 50;

    void validate() const {
        if (levels < 2 || levels > 6) throw ValidationError("levels must lie in [2, 6]");
        if (n_max < 2) throw ValidationError("n_max must be >= 2");
        if (n_max < levels) throw ValidationError("n_max must be >= levels");
        if (!(alpha >= 0.0)) throw ValidationError("alpha must be >= 0");
    }
};

class AmbiguousLabelError : public Error {
public:
    using Error::Error;
};

/// Block of the n-excitation manifold in the basis j = 0..min(levels, n+1)-1,
/// where basis state j has transmon level j and n - j phonons.
inline Eigen::MatrixXd build_block(int n, const JCParams& p) {
    if (n < 0) throw DomainError("build_block: n must be >= 0");
    const int d = std::min(p.levels, n + 1);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d, d);
    for (int j = 0; j < d; ++j) h(j, j) = transmon_level(j, p.omega_q, p.alpha, p.levels) + (n - j) * p.omega_cav;
    for (int j = 0; j + 1 < d; ++j) {
        const double c = std::sqrt(static_cast<double>(j + 1)) * std::sqrt(static_cast<double>(n - j)) * p.g;
        h(j, j + 1) = c;
        h(j + 1, j) = c;
    }
    return h;
}

struct DressedLadder {
    int phonons = 0;   // rows: i = 0..phonons-1
    int levels = 0;
    std::vector<double> energy;    // Hz, E(i, j)
    std::vector<double> overlap;   // squared overlap with the bare state
    std::vector<bool> ambiguous;

    std::size_t index(int i, int j) const {
        if (i < 0 || i >= phonons || j < 0 || j >= levels) throw DomainError("dressed ladder index out of range");
        return static_cast<std::size_t>(i * levels + j);
    }
    double E(int i, int j) const { return energy[index(i, j)]; }
    bool is_ambiguous(int i, int j) const { return ambiguous[index(i, j)]; }

    /// |g>-|e> transition with i phonons, E(i,1) - E(i,0).
    double qubit_transition(int i) const {
        if (is_ambiguous(i, 0) || is_ambiguous(i, 1))
            throw AmbiguousLabelError("dressed labels ambiguous at phonon number " + std::to_string(i));
        return E(i, 1) - E(i, 0);
    }
};

/// Dressed energies for i = 0..n_max - levels phonons. A bare state whose best
/// eigenvector overlap is below 0.5 is flagged ambiguous rather than tie-broken.
inline DressedLadder dressed_energies(const JCParams& p) {
    p.validate();
    DressedLadder ladder;
    ladder.phonons = p.n_max - p.levels + 1;
    ladder.levels = p.levels;
    const std::size_t cells = static_cast<std::size_t>(ladder.phonons * ladder.levels);
    ladder.energy.assign(cells, 0.0);
    ladder.overlap.assign(cells, 0.0);
    ladder.ambiguous.assign(cells, false);
    const int n_last = ladder.phonons - 1 + p.levels - 1;
    for (int n = 0; n <= n_last; ++n) {
        const SymmetricEigen se = jacobi_eigen(build_block(n, p));
        const auto d = se.values.size();
        for (Eigen::Index j = 0; j < d; ++j) {
            const int i = n - static_cast<int>(j);
            if (i >= ladder.phonons) continue;
            Eigen::Index best = 0;
            se.vectors.row(j).cwiseAbs2().maxCoeff(&best);
            const double w = se.vectors(j, best) * se.vectors(j, best);
            const std::size_t at = ladder.index(i, static_cast<int>(j));
            ladder.energy[at] = se.values(best);
            ladder.overlap[at] = w;
            ladder.ambiguous[at] = w < 0.5;
        }
    }
    return ladder;
}

/// Dispersive shift from the dressed ladder, 2 chi(i) = omega_q(i+1) - omega_q(i).
inline double chi(int i, const DressedLadder& ladder) {
    return 0.5 * (ladder.qubit_transition(i + 1) - ladder.qubit_transition(i));
}

inline double chi(int i, const JCParams& p) { return chi(i, dressed_energies(p)); }

/// Three-level closed form, -g^2 alpha / (Delta (Delta - alpha)) with
/// Delta = omega_q - omega_cav. Same sign convention as chi().
inline double chi_standard(double g, double delta, double alpha) {
    if (delta == 0.0 || delta == alpha) throw DomainError("chi_standard: pole at delta = 0 or delta = alpha");
    return -g * g * alpha / (delta * (delta - alpha));
}

/// Qubit frequency shift omega_q(i) - omega_q(0) for each requested phonon number.
inline std::vector<double> stark_curve(const std::vector<int>& phonon_numbers, const JCParams& p) {
    const DressedLadder ladder = dressed_energies(p);
    const double base = ladder.qubit_transition(0);
    std::vector<double> out;
    out.reserve(phonon_numbers.size());
    for (int i : phonon_numbers) {
        if (i < 0 || i >= ladder.phonons) throw DomainError("stark_curve: phonon number outside ladder");
        out.push_back(ladder.qubit_transition(i) - base);
    }
    return out;
}

/// Locates the qubit frequency in [lo, hi] where the dressed labels of
/// (i, j_hi) and (i + j_hi - j_lo, j_lo) swap order, i.e. where the bare
/// levels cross and chi diverges. Bisection on the sign of their difference.
inline double label_crossing(JCParams p, int i, int j_hi, int j_lo, double lo, double hi, double tol = 1e3) {
    if (j_hi <= j_lo) throw DomainError("label_crossing: j_hi must exceed j_lo");
    const int i_lo = i + j_hi - j_lo;
    auto diff = [&](double wq) {
        p.omega_q = wq;
        const DressedLadder l = dressed_energies(p);
        return l.E(i, j_hi) - l.E(i_lo, j_lo);
    };
    double f_lo = diff(lo), f_hi = diff(hi);
    if (f_lo * f_hi > 0.0) throw Error("label_crossing: no sign change in bracket");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = diff(mid);
        if ((f_mid < 0.0) == (f_lo < 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    (void)f_hi;
    return 0.5 * (lo + hi);
}

} // namespace cqad
