#pragma once

// Cyclic Jacobi eigensolver for small dense real symmetric matrices.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "cqad/error.hpp"

namespace cqad {

struct SymmetricEigen {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // column k belongs to values[k]
    int sweeps = 0;
};

struct JacobiOptions {
    double tolerance = 1e-13;   // off-diagonal Frobenius norm relative to ||H||_F
    int max_sweeps = 100;
    double symmetry_tolerance = 1e-12;
};

inline void check_symmetric(const Eigen::MatrixXd& h, double rel_tol) {
    if (h.rows() != h.cols()) throw ShapeError("matrix must be square");
    const double scale = std::max(h.norm(), 1e-300);
    for (Eigen::Index i = 0; i < h.rows(); ++i)
        for (Eigen::Index j = i + 1; j < h.cols(); ++j)
            if (std::abs(h(i, j) - h(j, i)) > rel_tol * scale)
                throw ValidationError("matrix is not symmetric");
}

/// Full spectral decomposition H = V diag(values) V^T.
///
/// Rotations are applied row by row over the strict upper triangle, so the
/// result is bit-for-bit reproducible. The mean of the diagonal is removed
/// before rotating; eigenvector signs are fixed so that the largest-magnitude
/// component of every column is positive.
inline SymmetricEigen jacobi_eigen(const Eigen::MatrixXd& h, const JacobiOptions& opt = {}) {
    check_symmetric(h, opt.symmetry_tolerance);
    const Eigen::Index n = h.rows();
    SymmetricEigen out;
    if (n == 0) return out;

    const double shift = h.diagonal().mean();
    Eigen::MatrixXd a = 0.5 * (h + h.transpose());
    a.diagonal().array() -= shift;
    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
    const double threshold = opt.tolerance * h.norm();

    auto off_norm = [&] {
        double s = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
        return std::sqrt(s);
    };

    int sweep = 0;
    while (off_norm() > threshold) {
        if (sweep++ >= opt.max_sweeps) throw Error("jacobi_eigen: no convergence");
        for (Eigen::Index p = 0; p < n - 1; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = a(q, p) = 0.0;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    out.sweeps = sweep;

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) { return a(i, i) < a(j, j); });

    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::Index src = order[static_cast<std::size_t>(k)];
        out.values(k) = a(src, src) + shift;
        Eigen::VectorXd col = v.col(src);
        Eigen::Index imax = 0;
        col.cwiseAbs().maxCoeff(&imax);
        if (col(imax) < 0.0) col = -col;
        out.vectors.col(k) = col;
    }
    return out;
}

} // namespace cqad
