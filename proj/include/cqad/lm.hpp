#pragma once

// Damped Gauss-Newton (Levenberg-Marquardt) with central-difference
// Jacobians, and a Nelder-Mead simplex for rank-deficient problems.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "cqad/error.hpp"

namespace cqad {

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct LmOptions {
    int max_iterations = 200;
    double ftol = 1e-14;          // relative decrease of the sum of squares
    double xtol = 1e-12;          // relative step size, in scaled units
    double diff_step = 1e-6;      // central-difference step relative to max(|x|, scale)
    double lambda0 = 1e-3;
    double rank_tolerance = 1e-13; // reciprocal condition number of the scaled normal matrix
    Eigen::VectorXd scale;        // typical magnitude per parameter; ones when empty
};

struct LmResult {
    Eigen::VectorXd x;
    double ssr = 0.0;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
    bool rank_deficient = false;
    std::string method = "levenberg-marquardt";
    std::string message;
    std::vector<double> ssr_history;   // initial value, then every accepted step
    Eigen::MatrixXd jacobian;          // at the returned point
    std::size_t residual_count = 0;
};

inline Eigen::VectorXd parameter_scale(const LmOptions& opt, Eigen::Index n) {
    if (opt.scale.size() == 0) return Eigen::VectorXd::Ones(n);
    if (opt.scale.size() != n) throw ShapeError("LmOptions::scale has wrong length");
    return opt.scale.cwiseAbs();
}

inline Eigen::MatrixXd central_jacobian(const ResidualFn& f, const Eigen::VectorXd& x, const Eigen::VectorXd& scale,
                                        double rel_step, Eigen::Index m, int& evaluations) {
    Eigen::MatrixXd jac(m, x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        const double h = rel_step * std::max(std::abs(x(j)), scale(j));
        Eigen::VectorXd xp = x, xm = x;
        xp(j) += h;
        xm(j) -= h;
        const Eigen::VectorXd rp = f(xp), rm = f(xm);
        evaluations += 2;
        if (rp.size() != m || rm.size() != m) throw ShapeError("residual length changed between evaluations");
        jac.col(j) = (rp - rm) / (2.0 * h);
    }
    return jac;
}

/// True when the column-scaled normal matrix is numerically singular.
inline bool is_rank_deficient(const Eigen::MatrixXd& jac, double tol) {
    const Eigen::MatrixXd a = jac.transpose() * jac;
    Eigen::VectorXd d = a.diagonal().cwiseSqrt();
    if ((d.array() <= 0.0).any() || !d.allFinite()) return true;
    const Eigen::MatrixXd s = d.cwiseInverse().asDiagonal() * a * d.cwiseInverse().asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
    return !(hi > 0.0) || lo <= tol * hi;
}

/// Minimizes |r(x)|^2. Only steps that lower the sum of squares are accepted,
/// so ssr_history is non-increasing.
inline LmResult levenberg_marquardt(const ResidualFn& f, Eigen::VectorXd x, const LmOptions& opt = {}) {
    const Eigen::VectorXd scale = parameter_scale(opt, x.size());
    LmResult res;
    Eigen::VectorXd r = f(x);
    res.evaluations = 1;
    const Eigen::Index m = r.size();
    res.residual_count = static_cast<std::size_t>(m);
    double ssr = r.squaredNorm();
    if (!std::isfinite(ssr)) throw Error("levenberg_marquardt: non-finite residual at start");
    res.ssr_history.push_back(ssr);
    double lambda = opt.lambda0;
    Eigen::MatrixXd jac = central_jacobian(f, x, scale, opt.diff_step, m, res.evaluations);

    for (int it = 0; it < opt.max_iterations; ++it) {
        res.iterations = it + 1;
        if (ssr == 0.0) {
            res.converged = true;
            res.message = "exact fit";
            break;
        }
        const Eigen::MatrixXd a = jac.transpose() * jac;
        const Eigen::VectorXd g = jac.transpose() * r;
        Eigen::VectorXd diag = a.diagonal();
        const double floor = std::max(diag.maxCoeff() * 1e-12, 1e-300);
        for (Eigen::Index j = 0; j < diag.size(); ++j) diag(j) = std::max(diag(j), floor);

        bool accepted = false;
        Eigen::VectorXd step;
        double ssr_new = ssr;
        Eigen::VectorXd r_new;
        while (lambda < 1e16) {
            Eigen::MatrixXd damped = a;
            damped.diagonal() += lambda * diag;
            step = damped.ldlt().solve(-g);
            if (!step.allFinite()) {
                lambda *= 10.0;
                continue;
            }
            const Eigen::VectorXd x_try = x + step;
            r_new = f(x_try);
            ++res.evaluations;
            ssr_new = r_new.squaredNorm();
            if (std::isfinite(ssr_new) && ssr_new < ssr) {
                accepted = true;
                break;
            }
            lambda *= 10.0;
        }
        if (!accepted) {
            res.converged = true;
            res.message = "no further decrease possible";
            break;
        }
        const double decrease = ssr - ssr_new;
        x += step;
        r = std::move(r_new);
        ssr = ssr_new;
        res.ssr_history.push_back(ssr);
        lambda = std::max(lambda / 10.0, 1e-12);
        jac = central_jacobian(f, x, scale, opt.diff_step, m, res.evaluations);

        const double step_norm = step.cwiseQuotient(scale).norm();
        const double x_norm = x.cwiseQuotient(scale).norm();
        if (decrease <= opt.ftol * ssr_new || step_norm <= opt.xtol * (x_norm + opt.xtol)) {
            res.converged = true;
            res.message = decrease <= opt.ftol * ssr_new ? "relative reduction below ftol" : "step below xtol";
            break;
        }
    }
    if (!res.converged) res.message = "iteration limit reached";
    res.x = x;
    res.ssr = ssr;
    res.jacobian = jac;
    res.rank_deficient = is_rank_deficient(jac, opt.rank_tolerance);
    return res;
}

struct NelderMeadOptions {
    int max_evaluations = 4000;
    double ftol = 1e-12;    // relative spread of simplex values
    double xtol = 1e-10;    // simplex diameter in scaled units
    Eigen::VectorXd scale;  // initial simplex edge per parameter
};

struct NelderMeadResult {
    Eigen::VectorXd x;
    double value = 0.0;
    int evaluations = 0;
    bool converged = false;
};

inline NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& fn, const Eigen::VectorXd& x0,
                                    const NelderMeadOptions& opt = {}) {
    const Eigen::Index n = x0.size();
    const Eigen::VectorXd scale = opt.scale.size() == n ? opt.scale : Eigen::VectorXd::Ones(n);
    std::vector<Eigen::VectorXd> pts(static_cast<std::size_t>(n + 1), x0);
    std::vector<double> vals(static_cast<std::size_t>(n + 1));
    NelderMeadResult out;
    for (Eigen::Index j = 0; j < n; ++j) pts[static_cast<std::size_t>(j + 1)](j) += 0.1 * scale(j);
    for (std::size_t i = 0; i < pts.size(); ++i) vals[i] = fn(pts[i]);
    out.evaluations = static_cast<int>(pts.size());

    std::vector<std::size_t> order(pts.size());
    while (out.evaluations < opt.max_evaluations) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        const std::size_t best = order.front(), worst = order.back(), second = order[order.size() - 2];
        double diameter = 0.0;
        for (const auto& p : pts) diameter = std::max(diameter, (p - pts[best]).cwiseQuotient(scale).norm());
        if (std::abs(vals[worst] - vals[best]) <= opt.ftol * (std::abs(vals[best]) + 1e-300) || diameter <= opt.xtol) {
            out.converged = true;
            break;
        }
        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (std::size_t i = 0; i < pts.size(); ++i)
            if (i != worst) centroid += pts[i];
        centroid /= static_cast<double>(n);

        auto trial = [&](double t) {
            Eigen::VectorXd p = centroid + t * (pts[worst] - centroid);
            const double v = fn(p);
            ++out.evaluations;
            return std::pair{p, v};
        };
        auto [xr, fr] = trial(-1.0);
        if (fr < vals[best]) {
            auto [xe, fe] = trial(-2.0);
            if (fe < fr) {
                pts[worst] = xe;
                vals[worst] = fe;
            } else {
                pts[worst] = xr;
                vals[worst] = fr;
            }
        } else if (fr < vals[second]) {
            pts[worst] = xr;
            vals[worst] = fr;
        } else {
            auto [xc, fc] = fr < vals[worst] ? trial(-0.5) : trial(0.5);
            if (fc < std::min(fr, vals[worst])) {
                pts[worst] = xc;
                vals[worst] = fc;
            } else {
                for (std::size_t i = 0; i < pts.size(); ++i) {
                    if (i == best) continue;
                    pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
                    vals[i] = fn(pts[i]);
                    ++out.evaluations;
                }
            }
        }
    }
    const auto it = std::min_element(vals.begin(), vals.end());
    out.x = pts[static_cast<std::size_t>(it - vals.begin())];
    out.value = *it;
    return out;
}

/// LM first; if the Jacobian is rank-deficient at its answer, polish with
/// Nelder-Mead on the sum of squares.
inline LmResult least_squares(const ResidualFn& f, const Eigen::VectorXd& x0, const LmOptions& opt = {}) {
    LmResult lm = levenberg_marquardt(f, x0, opt);
    if (!lm.rank_deficient) return lm;
    NelderMeadOptions nm;
    nm.scale = parameter_scale(opt, x0.size());
    const NelderMeadResult simplex = nelder_mead([&](const Eigen::VectorXd& x) { return f(x).squaredNorm(); }, lm.x, nm);
    if (simplex.value <= lm.ssr) {
        lm.x = simplex.x;
        lm.ssr = simplex.value;
        lm.ssr_history.push_back(simplex.value);
        lm.jacobian = central_jacobian(f, lm.x, nm.scale, opt.diff_step, static_cast<Eigen::Index>(lm.residual_count),
                                       lm.evaluations);
    }
    lm.evaluations += simplex.evaluations;
    lm.converged = lm.converged || simplex.converged;
    lm.method = "nelder-mead";
    lm.message = "rank-deficient Jacobian; simplex fallback";
    return lm;
}

/// Standard errors sqrt(diag(s^2 (J^T J)^+)), s^2 = ssr / (m - n). Directions
/// the data do not constrain come back as +inf.
inline Eigen::VectorXd standard_errors(const Eigen::MatrixXd& jac, double ssr) {
    const Eigen::Index m = jac.rows(), n = jac.cols();
    Eigen::VectorXd se = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());
    if (m <= n) return se;
    const double s2 = ssr / static_cast<double>(m - n);
    const Eigen::MatrixXd a = jac.transpose() * jac;
    Eigen::VectorXd d = a.diagonal().cwiseSqrt();
    for (Eigen::Index j = 0; j < n; ++j)
        if (!(d(j) > 0.0)) d(j) = 1.0;
    const Eigen::MatrixXd s = d.cwiseInverse().asDiagonal() * a * d.cwiseInverse().asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
    const double hi = es.eigenvalues().maxCoeff();
    Eigen::MatrixXd inv = Eigen::MatrixXd::Zero(n, n);
    std::vector<bool> unconstrained(static_cast<std::size_t>(n), false);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double ev = es.eigenvalues()(k);
        if (ev > 1e-13 * hi) {
            inv += es.eigenvectors().col(k) * es.eigenvectors().col(k).transpose() / ev;
        } else {
            for (Eigen::Index j = 0; j < n; ++j)
                if (std::abs(es.eigenvectors()(j, k)) > 1e-6) unconstrained[static_cast<std::size_t>(j)] = true;
        }
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        if (unconstrained[static_cast<std::size_t>(j)]) continue;
        se(j) = std::sqrt(s2 * inv(j, j)) / d(j);
    }
    return se;
}

} // namespace cqad
