#pragma once

// Parameter estimation from spectra. The bare fit runs in two stages
// (per-dip line shapes, then the cavity-IDT coupling pattern); the flux fit
// adjusts {g0, phi_q, Ib} against a whole |s11| map.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cqad/core.hpp"
#include "cqad/lm.hpp"
#include "cqad/reflection.hpp"

namespace cqad {

struct ParamEstimate {
    double value = 0.0;
    double error = 0.0;   // standard error, +inf when the data do not constrain it
};

struct FitResult {
    std::map<std::string, ParamEstimate> parameters;
    double residual_norm = 0.0;
    int iterations = 0;
    bool converged = false;
    std::string method;
    std::string message;
    std::vector<std::string> warnings;
    std::vector<double> ssr_history;

    double value(const std::string& name) const {
        const auto it = parameters.find(name);
        if (it == parameters.end()) throw FitError("fit result has no parameter '" + name + "'");
        return it->second.value;
    }
    double error_of(const std::string& name) const {
        const auto it = parameters.find(name);
        if (it == parameters.end()) throw FitError("fit result has no parameter '" + name + "'");
        return it->second.error;
    }
};

namespace detail {

inline FitResult from_lm(const LmResult& lm, const std::vector<std::string>& names) {
    FitResult out;
    const Eigen::VectorXd se = standard_errors(lm.jacobian, lm.ssr);
    for (std::size_t j = 0; j < names.size(); ++j)
        out.parameters[names[j]] = {lm.x(static_cast<Eigen::Index>(j)), se(static_cast<Eigen::Index>(j))};
    out.residual_norm = std::sqrt(lm.ssr);
    out.iterations = lm.iterations;
    out.converged = lm.converged;
    out.method = lm.method;
    out.message = lm.message;
    out.ssr_history = lm.ssr_history;
    if (!std::isfinite(out.residual_norm)) throw FitError("fit produced a non-finite residual norm");
    return out;
}

/// Centered moving average with half-width h (points), shrinking at the edges.
inline std::vector<double> moving_average(const std::vector<double>& y, std::size_t h) {
    if (h == 0) return y;
    const std::size_t n = y.size();
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + y[i];
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i >= h ? i - h : 0, hi = std::min(n, i + h + 1);
        out[i] = (prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo);
    }
    return out;
}

/// Three box passes approximating a Gaussian of standard deviation sigma_pts.
inline std::vector<double> gaussian_blur(const std::vector<double>& y, double sigma_pts) {
    if (sigma_pts <= 0.0) return y;
    // Three boxes of width 2h+1 give variance 3 ((2h+1)^2 - 1) / 12 = h (h + 1).
    const auto h = static_cast<std::size_t>(std::max(0.0, std::round(0.5 * (std::sqrt(1.0 + 4.0 * sigma_pts * sigma_pts) - 1.0))));
    std::vector<double> out = y;
    for (int pass = 0; pass < 3; ++pass) out = moving_average(out, h);
    return out;
}

inline double grid_step(const std::vector<double>& grid) {
    if (grid.size() < 2) throw FitError("frequency grid needs at least two points");
    const double df = (grid.back() - grid.front()) / static_cast<double>(grid.size() - 1);
    if (!(df > 0.0)) throw FitError("frequency grid must be increasing");
    return df;
}

} // namespace detail

// ---------------------------------------------------------------- bare modes

struct BareFitOptions {
    double smoothing_hz = 20e3;        // moving-average half-width for dip picking
    double min_separation_hz = 500e3;  // dips closer than this are merged
    double prominence = 0.02;          // minimum depth of 1 - |s11| below the local top
    double fsr_hz = 4.8e6;             // transverse dips sit within fsr/2 above a parent
    int first_label = 1;               // label of the lowest longitudinal dip
    int label_offset = 2;              // model index m = label + label_offset
    int N_c = 80;                      // held fixed in stage 2
    LmOptions lm;
};

struct ModeFit {
    int label = 0;
    ModeKind kind = ModeKind::longitudinal;
    std::optional<int> parent;
    double frequency = 0.0;
    double kappa_in = 0.0;
    double kappa_ex = 0.0;
    double sigma_frequency = 0.0;
    double sigma_kappa_in = 0.0;
    double sigma_kappa_ex = 0.0;
};

struct BareFit {
    std::vector<ModeFit> modes;   // sorted by frequency
    FitResult dips;               // stage 1, joint line-shape fit
    FitResult coupling;           // stage 2: kappa0, phi_c, f_c
    int N_c = 80;
    int label_offset = 2;

    FitResult summary() const {
        FitResult out = coupling;
        out.converged = dips.converged && coupling.converged;
        out.iterations = dips.iterations + coupling.iterations;
        out.warnings = dips.warnings;
        out.warnings.insert(out.warnings.end(), coupling.warnings.begin(), coupling.warnings.end());
        return out;
    }

    /// Mode table for the resonant model. Signs of the external amplitudes
    /// come from the fitted coupling pattern, magnitudes from the dips.
    AcousticModeSet to_mode_set(double fsr_hz, double mirror_bandwidth, double spacing_tolerance = 0.01) const {
        const double k0 = coupling.value("kappa0"), phi = coupling.value("phi_c"), fc = coupling.value("f_c");
        auto sign_of = [&](int label, double f) {
            const auto e = external_amplitude(label + label_offset, f, k0, phi, N_c, fc);
            return e.amplitude < 0.0 ? -1.0 : 1.0;
        };
        std::map<int, double> parent_sign;
        for (const auto& m : modes)
            if (m.kind == ModeKind::longitudinal) parent_sign[m.label] = sign_of(m.label, m.frequency);
        std::vector<AcousticMode> out;
        for (const auto& m : modes) {
            const double s = m.kind == ModeKind::longitudinal ? parent_sign[m.label] : parent_sign[*m.parent];
            out.push_back({m.label, m.kind, m.frequency, m.kappa_in, s * std::sqrt(m.kappa_ex / k0), m.parent});
        }
        return AcousticModeSet(std::move(out), fsr_hz, fc, mirror_bandwidth, k0, spacing_tolerance);
    }
};

struct DipGuess {
    std::size_t index = 0;
    double frequency = 0.0;
    double kappa_in = 0.0;
    double kappa_ex = 0.0;
};

/// Local minima of the smoothed |s11| that stand out by `prominence`.
inline std::vector<DipGuess> pick_dips(const ReflectionSpectrum& s, const BareFitOptions& opt) {
    const double df = detail::grid_step(s.frequencies);
    const std::size_t n = s.frequencies.size();
    std::vector<double> mag(n), pow2(n);
    for (std::size_t i = 0; i < n; ++i) {
        mag[i] = std::abs(s.s11[i]);
        pow2[i] = std::norm(s.s11[i]);
    }
    const auto smooth_h = static_cast<std::size_t>(std::round(opt.smoothing_hz / df));
    const std::vector<double> m = detail::moving_average(mag, smooth_h);
    const std::vector<double> p = detail::moving_average(pow2, smooth_h);
    const auto sep = std::max<std::size_t>(1, static_cast<std::size_t>(std::round(opt.min_separation_hz / df)));

    std::vector<DipGuess> dips;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i >= sep ? i - sep : 0, hi = std::min(n - 1, i + sep);
        bool is_min = true;
        double top = m[i];
        for (std::size_t j = lo; j <= hi && is_min; ++j) {
            if (j < i ? m[j] <= m[i] : (j > i && m[j] < m[i])) is_min = false;
            top = std::max(top, m[j]);
        }
        if (!is_min || top - m[i] < opt.prominence) continue;

        // Half-depth width of 1 - |s11|^2 is the total linewidth of an isolated mode.
        const double depth = 1.0 - p[i];
        const double half = 1.0 - 0.5 * depth;
        std::size_t a = i, b = i;
        while (a > lo && p[a] < half) --a;
        while (b < hi && p[b] < half) ++b;
        const double kappa = std::max(static_cast<double>(b - a) * df, 2.0 * df);
        const double d = std::clamp(depth, 0.0, 1.0);
        DipGuess g;
        g.index = i;
        g.frequency = s.frequencies[i];
        g.kappa_ex = 0.5 * kappa * (1.0 - std::sqrt(1.0 - d));   // under-coupled root
        g.kappa_in = kappa - g.kappa_ex;
        dips.push_back(g);
    }
    return dips;
}

inline BareFit fit_bare_modes(const ReflectionSpectrum& spectrum, const BareFitOptions& opt = {}) {
    if (spectrum.frequencies.size() != spectrum.s11.size()) throw ShapeError("spectrum: s11 and grid lengths differ");
    const auto dips = pick_dips(spectrum, opt);
    if (dips.size() < 3)
        throw FitError("bare fit needs at least 3 resolvable dips, found " + std::to_string(dips.size()));

    // Stage 1: joint complex fit of all dips. Frequencies enter as offsets
    // from the picked position so the difference step scales with linewidth.
    const std::size_t nd = dips.size(), n = spectrum.frequencies.size();
    Eigen::VectorXd x0(static_cast<Eigen::Index>(3 * nd)), scale(static_cast<Eigen::Index>(3 * nd));
    for (std::size_t k = 0; k < nd; ++k) {
        const double w = dips[k].kappa_in + dips[k].kappa_ex;
        x0.segment(static_cast<Eigen::Index>(3 * k), 3) << 0.0, dips[k].kappa_in, dips[k].kappa_ex;
        scale.segment(static_cast<Eigen::Index>(3 * k), 3) << w, w, w;
    }
    auto resonances = [&](const Eigen::VectorXd& x) {
        std::vector<Resonance> r(nd);
        for (std::size_t k = 0; k < nd; ++k) {
            const auto b = static_cast<Eigen::Index>(3 * k);
            r[k] = {dips[k].frequency + x(b), std::abs(x(b + 1)), std::abs(x(b + 2))};
        }
        return r;
    };
    const ResidualFn residual = [&](const Eigen::VectorXd& x) {
        const auto r = resonances(x);
        Eigen::VectorXd out(static_cast<Eigen::Index>(2 * n));
        for (std::size_t i = 0; i < n; ++i) {
            const cplx d = reflection_at(spectrum.frequencies[i], r) - spectrum.s11[i];
            out(static_cast<Eigen::Index>(2 * i)) = d.real();
            out(static_cast<Eigen::Index>(2 * i + 1)) = d.imag();
        }
        return out;
    };
    LmOptions lm = opt.lm;
    lm.scale = scale;
    const LmResult stage1 = least_squares(residual, x0, lm);

    BareFit fit;
    fit.N_c = opt.N_c;
    fit.label_offset = opt.label_offset;
    {
        std::vector<std::string> names;
        for (std::size_t k = 0; k < nd; ++k)
            for (const char* p : {"df", "kappa_in", "kappa_ex"}) names.push_back("dip" + std::to_string(k) + "." + p);
        fit.dips = detail::from_lm(stage1, names);
    }
    const Eigen::VectorXd se1 = standard_errors(stage1.jacobian, stage1.ssr);
    for (std::size_t k = 0; k < nd; ++k) {
        const auto b = static_cast<Eigen::Index>(3 * k);
        ModeFit m;
        m.frequency = dips[k].frequency + stage1.x(b);
        m.kappa_in = std::abs(stage1.x(b + 1));
        m.kappa_ex = std::abs(stage1.x(b + 2));
        m.sigma_frequency = se1(b);
        m.sigma_kappa_in = se1(b + 1);
        m.sigma_kappa_ex = se1(b + 2);
        fit.modes.push_back(m);
    }
    std::sort(fit.modes.begin(), fit.modes.end(), [](const ModeFit& a, const ModeFit& b) { return a.frequency < b.frequency; });
    for (std::size_t k = 0; k + 1 < fit.modes.size(); ++k) {
        const auto& a = fit.modes[k];
        const auto& b = fit.modes[k + 1];
        if (b.frequency - a.frequency < a.kappa_in + a.kappa_ex + b.kappa_in + b.kappa_ex)
            fit.dips.warnings.push_back("overlapping dips near " + std::to_string(a.frequency) + " and " +
                                        std::to_string(b.frequency) + " Hz");
    }

    // A weak dip within fsr/2 above a dip more than twice as strongly coupled
    // is a transverse satellite of it.
    std::vector<std::size_t> longitudinal;
    for (std::size_t k = 0; k < fit.modes.size(); ++k) {
        bool satellite = false;
        for (std::size_t j = 0; j < k && !satellite; ++j) {
            const double gap = fit.modes[k].frequency - fit.modes[j].frequency;
            satellite = fit.modes[j].kind == ModeKind::longitudinal && gap > 0.0 && gap <= 0.5 * opt.fsr_hz &&
                        fit.modes[j].kappa_ex > 2.0 * fit.modes[k].kappa_ex;
            if (satellite) {
                fit.modes[k].kind = ModeKind::transverse;
                fit.modes[k].parent = static_cast<int>(j);   // index for now, label below
            }
        }
        if (!satellite) longitudinal.push_back(k);
    }
    for (std::size_t r = 0; r < longitudinal.size(); ++r)
        fit.modes[longitudinal[r]].label = opt.first_label + static_cast<int>(r);
    for (auto& m : fit.modes)
        if (m.kind == ModeKind::transverse) {
            m.label = fit.modes[static_cast<std::size_t>(*m.parent)].label;
            m.parent = m.label;
        }
    if (longitudinal.size() < 3)
        throw FitError("bare fit stage 2 needs at least 3 longitudinal dips, found " + std::to_string(longitudinal.size()));

    // Stage 2: kappa_ex(m) = kappa0 [sin(m pi/2 + phi_c) sinc(pi N_c (f_m - f_c) / f_c)]^2.
    std::vector<int> idx;
    std::vector<double> f, kex;
    for (auto k : longitudinal) {
        idx.push_back(fit.modes[k].label + opt.label_offset);
        f.push_back(fit.modes[k].frequency);
        kex.push_back(fit.modes[k].kappa_ex);
    }
    double even = 0.0, odd = 0.0, kmax = 0.0;
    int n_even = 0, n_odd = 0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
        (idx[k] % 2 == 0 ? even : odd) += kex[k];
        (idx[k] % 2 == 0 ? n_even : n_odd) += 1;
        kmax = std::max(kmax, kex[k]);
    }
    const double f_mid = 0.5 * (f.front() + f.back());
    const double phi0 = (n_even && n_odd) ? std::atan(std::sqrt((even / n_even) / std::max(odd / n_odd, 1e-300))) : kPi / 4;
    const ResidualFn r2 = [&](const Eigen::VectorXd& x) {
        Eigen::VectorXd out(static_cast<Eigen::Index>(idx.size()));
        for (std::size_t k = 0; k < idx.size(); ++k)
            out(static_cast<Eigen::Index>(k)) =
                external_amplitude(idx[k], f[k], x(0), x(1), opt.N_c, f_mid + x(2)).kappa_ex - kex[k];
        return out;
    };
    LmOptions lm2 = opt.lm;
    lm2.scale = Eigen::Vector3d(kmax, 0.1, 1e6);
    // A few starting offsets for f_c keep LM out of the sinc side lobes.
    LmResult best;
    bool have = false;
    for (double start : {0.0, -10e6, 10e6, -25e6, 25e6}) {
        Eigen::Vector3d x(2.0 * kmax, phi0, start);
        LmResult r = least_squares(r2, x, lm2);
        if (!have || r.ssr < best.ssr) {
            best = r;
            have = true;
        }
    }
    // phi_c is identifiable only up to sign and modulo pi; report it in [0, pi/2].
    double phi = std::remainder(best.x(1), kPi);
    phi = std::abs(phi);
    best.x(1) = phi;
    best.x(0) = std::abs(best.x(0));
    best.x(2) += f_mid;
    fit.coupling = detail::from_lm(best, {"kappa0", "phi_c", "f_c"});
    return fit;
}

// ------------------------------------------------------------------ flux map

struct FluxFitOptions {
    unsigned threads = 1;
    double ib_guess = 0.0;                 // A
    std::optional<double> g0_guess;        // Hz; largest splitting / 2 when unset
    double ib_scan_halfwidth = 5e-6;       // A
    double ib_scan_step = 0.5e-6;          // A
    int phi_scan_points = 12;              // over (-pi/2, pi/2]
    std::size_t scan_decimation = 4;       // frequency columns used by the coarse scan
    std::vector<double> blur_sigmas{1.5e6, 0.4e6};  // Hz, continuation before the raw fit
    double splitting_prominence = 0.05;
    LmOptions lm;
};

namespace detail {

/// Largest gap between neighbouring dips in any row, inside the span of the bare modes.
inline double largest_splitting(const FluxSweepMap& map, const AcousticModeSet& modes, double prominence) {
    const double lo = modes[0].frequency, hi = modes[modes.size() - 1].frequency;
    const std::size_t nf = map.frequencies.size();
    double best = 0.0;
    for (std::size_t r = 0; r < map.currents.size(); ++r) {
        std::vector<double> row(map.magnitude.begin() + static_cast<std::ptrdiff_t>(r * nf),
                                map.magnitude.begin() + static_cast<std::ptrdiff_t>((r + 1) * nf));
        row = moving_average(row, 1);
        double prev = -1.0;
        for (std::size_t j = 1; j + 1 < nf; ++j) {
            const double f = map.frequencies[j];
            if (f < lo - modes.fsr() || f > hi + modes.fsr()) continue;
            if (!(row[j] < row[j - 1] && row[j] <= row[j + 1])) continue;
            if (1.0 - row[j] < prominence) continue;
            if (prev >= 0.0) best = std::max(best, f - prev);
            prev = f;
        }
    }
    return best;
}

inline std::vector<double> deficit_blurred(const std::vector<double>& mag, std::size_t rows, std::size_t cols,
                                           double sigma_pts) {
    std::vector<double> out(mag.size());
    std::vector<double> row(cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t j = 0; j < cols; ++j) row[j] = 1.0 - mag[r * cols + j];
        const auto b = gaussian_blur(row, sigma_pts);
        std::copy(b.begin(), b.end(), out.begin() + static_cast<std::ptrdiff_t>(r * cols));
    }
    return out;
}

} // namespace detail

/// Fits {g0, phi_q, Ib} to an |s11| map with the bare modes and the transmon
/// tuning curve held fixed. g0 comes back >= 0 and phi_q in (-pi/2, pi/2]:
/// the spectrum is unchanged when every coupling flips sign.
inline FitResult fit_flux_map(const FluxSweepMap& map, const AcousticModeSet& modes, const TransmonParams& transmon,
                              const CouplingParams& coupling, const FluxFitOptions& opt = {}) {
    map.validate();
    if (map.currents.empty() || map.frequencies.empty()) throw FitError("flux fit: empty map");
    if (modes.empty()) throw FitError("flux fit: no bare modes");
    const double df = detail::grid_step(map.frequencies);

    // The qubit has to pass through at least one bare mode inside the window.
    {
        double wq_lo = 1e300, wq_hi = -1e300;
        for (double I : map.currents) {
            for (double shift : {-opt.ib_scan_halfwidth, 0.0, opt.ib_scan_halfwidth}) {
                TransmonParams t = transmon;
                t.Ib = opt.ib_guess + shift;
                const double w = qubit_frequency(I, t);
                wq_lo = std::min(wq_lo, w);
                wq_hi = std::max(wq_hi, w);
            }
        }
        bool crossing = false;
        for (const auto& m : modes.modes())
            crossing = crossing || (m.frequency >= map.frequencies.front() && m.frequency <= map.frequencies.back() &&
                                    m.frequency >= wq_lo && m.frequency <= wq_hi);
        if (!crossing) throw FitError("flux fit: crossing region absent from data window");
    }

    FitResult out;
    const double g0_init = opt.g0_guess ? *opt.g0_guess
                                        : 0.5 * detail::largest_splitting(map, modes, opt.splitting_prominence);
    if (!(g0_init > 0.0)) throw FitError("flux fit: could not estimate an initial g0 from the map");

    const std::size_t rows = map.currents.size(), cols = map.frequencies.size();
    auto model_map = [&](const Eigen::VectorXd& x, const std::vector<double>& grid) {
        ResonantModel m{modes, transmon, coupling};
        m.coupling.g0 = x(0);
        m.coupling.phi_q = x(1);
        m.transmon.Ib = x(2);
        return flux_sweep(map.currents, grid, m, opt.threads).magnitude;
    };
    // Coarse scan over phi_q and Ib on a decimated grid with the widest blur.
    const std::size_t step = std::max<std::size_t>(1, opt.scan_decimation);
    std::vector<double> sub_grid;
    std::vector<std::size_t> sub_cols;
    for (std::size_t j = 0; j < cols; j += step) {
        sub_grid.push_back(map.frequencies[j]);
        sub_cols.push_back(j);
    }
    const double sigma0 = opt.blur_sigmas.empty() ? 0.0 : opt.blur_sigmas.front();
    std::vector<double> sub_data(rows * sub_cols.size());
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t k = 0; k < sub_cols.size(); ++k) sub_data[r * sub_cols.size() + k] = map.at(r, sub_cols[k]);
    const auto sub_target = detail::deficit_blurred(sub_data, rows, sub_cols.size(), sigma0 / (df * step));
    Eigen::Vector3d x(g0_init, 0.0, opt.ib_guess);
    double best_cost = 1e300;
    const int n_ib = static_cast<int>(std::floor(opt.ib_scan_halfwidth / opt.ib_scan_step + 1e-9));
    for (int p = 0; p < opt.phi_scan_points; ++p) {
        const double phi = -kPi / 2 + kPi * (p + 1) / opt.phi_scan_points;
        for (int k = -n_ib; k <= n_ib; ++k) {
            const Eigen::Vector3d trial(g0_init, phi, opt.ib_guess + k * opt.ib_scan_step);
            const auto model = detail::deficit_blurred(model_map(trial, sub_grid), rows, sub_cols.size(), sigma0 / (df * step));
            double cost = 0.0;
            for (std::size_t i = 0; i < model.size(); ++i) cost += (model[i] - sub_target[i]) * (model[i] - sub_target[i]);
            if (cost < best_cost) {
                best_cost = cost;
                x = trial;
            }
        }
    }

    // Continuation: blurred objectives first, then raw |s11|.
    LmOptions lm = opt.lm;
    lm.scale = Eigen::Vector3d(1e6, 0.1, 1e-6);
    LmResult last;
    int total_iterations = 0;
    std::vector<double> sigmas = opt.blur_sigmas;
    sigmas.push_back(0.0);
    for (double sigma : sigmas) {
        const double s_pts = sigma / df;
        const std::vector<double> target =
            sigma > 0.0 ? detail::deficit_blurred(map.magnitude, rows, cols, s_pts) : map.magnitude;
        const ResidualFn residual = [&](const Eigen::VectorXd& p) {
            std::vector<double> m = model_map(p, map.frequencies);
            if (sigma > 0.0) m = detail::deficit_blurred(m, rows, cols, s_pts);
            Eigen::VectorXd r(static_cast<Eigen::Index>(m.size()));
            for (std::size_t i = 0; i < m.size(); ++i) r(static_cast<Eigen::Index>(i)) = m[i] - target[i];
            return r;
        };
        // Blurred stages only have to land in the right basin.
        LmOptions stage = lm;
        if (sigma > 0.0) {
            stage.ftol = std::max(lm.ftol, 1e-6);
            stage.xtol = std::max(lm.xtol, 1e-6);
        }
        last = least_squares(residual, x, stage);
        x = last.x;
        total_iterations += last.iterations;
    }

    if (last.x(0) < 0.0) {
        last.x(0) = -last.x(0);
        last.x(1) += kPi;
    }
    double phi = std::remainder(last.x(1), kPi);   // [-pi/2, pi/2]
    if (phi <= -kPi / 2) phi += kPi;
    last.x(1) = phi;
    out = detail::from_lm(last, {"g0", "phi_q", "Ib"});
    out.iterations = total_iterations;
    if (!out.converged) out.warnings.push_back("flux fit did not converge: " + out.message);
    return out;
}

// --------------------------------------------------------------- Stark slope

struct StarkFit {
    double intercept = 0.0;
    double linear = 0.0;      // Hz per phonon, the 2 chi estimate
    double quadratic = 0.0;   // Hz per phonon^2
    double sigma_linear = 0.0;
    double sigma_quadratic = 0.0;
    double residual_norm = 0.0;
};

/// Ordinary least squares y = c0 + c1 n + c2 n^2.
inline StarkFit fit_stark_slope(const std::vector<std::pair<double, double>>& points) {
    std::vector<double> xs;
    for (const auto& p : points) xs.push_back(p.first);
    std::sort(xs.begin(), xs.end());
    const auto distinct = std::unique(xs.begin(), xs.end()) - xs.begin();
    if (points.size() < 3 || distinct < 3)
        throw RankError("stark fit: need at least 3 distinct phonon numbers for a quadratic");
    const auto m = static_cast<Eigen::Index>(points.size());
    Eigen::MatrixXd a(m, 3);
    Eigen::VectorXd y(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const double n = points[static_cast<std::size_t>(i)].first;
        a.row(i) << 1.0, n, n * n;
        y(i) = points[static_cast<std::size_t>(i)].second;
    }
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    if (qr.rank() < 3) throw RankError("stark fit: design matrix is rank-deficient");
    const Eigen::Vector3d c = qr.solve(y);
    const double ssr = (a * c - y).squaredNorm();
    StarkFit out;
    out.intercept = c(0);
    out.linear = c(1);
    out.quadratic = c(2);
    out.residual_norm = std::sqrt(ssr);
    const Eigen::VectorXd se = standard_errors(a, ssr);
    out.sigma_linear = se(1);
    out.sigma_quadratic = se(2);
    return out;
}

} // namespace cqad
