#pragma once

// One-port reflection of the acoustic cavity seen through the cavity IDT.
//
//   s11(f) = 1 - sum_m kappa_ex,m / (i (f - f_m) + (kappa_in,m + kappa_ex,m) / 2)
//
// with every rate a full width in Hz. An isolated mode has
// |s11(f_m)| = |kappa_in - kappa_ex| / (kappa_in + kappa_ex).

#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cqad/core.hpp"
#include "cqad/parallel.hpp"
#include "cqad/spectral.hpp"

namespace cqad {

using cplx = std::complex<double>;

struct CavityIdt {
    double kappa0 = 178.2e3;            // Hz
    double phi_c = kPi / 4.0 - 0.09;    // rad
    int N_c = 80;
    double f_c = 4.253e9;               // Hz
    double transverse_ratio = 0.35;     // a_tr / a for the parent mode
};

struct ExternalCoupling {
    double amplitude = 0.0;   // signed a_m
    double kappa_ex = 0.0;    // kappa0 a_m^2
};

/// a_m = sin(m pi / 2 + phi_c) sinc(pi N_c (f_m - f_c) / f_c) for a cavity IDT
/// centered in the cavity; m is the model mode index.
inline ExternalCoupling external_amplitude(int m, double f_m, double kappa0, double phi_c, int N_c, double f_c) {
    if (N_c < 1) throw DomainError("external_amplitude: N_c must be >= 1");
    const double a = std::sin(m * kPi / 2.0 + phi_c) * sinc(kPi * N_c * (f_m - f_c) / f_c);
    return {a, kappa0 * a * a};
}

struct Resonance {
    double frequency = 0.0;
    double kappa_in = 0.0;
    double kappa_ex = 0.0;
};

struct ReflectionSpectrum {
    std::vector<double> frequencies;
    std::vector<cplx> s11;
    std::optional<double> flux_bias;           // A
    std::map<std::string, double> metadata;
};

struct FluxSweepMap {
    std::vector<double> currents;
    std::vector<double> frequencies;
    std::vector<double> magnitude;   // row-major, one row per current

    double at(std::size_t row, std::size_t col) const { return magnitude[row * frequencies.size() + col]; }
    void validate() const {
        if (magnitude.size() != currents.size() * frequencies.size())
            throw ShapeError("flux map: magnitude size does not match axes");
    }
};

inline cplx reflection_at(double f, const std::vector<Resonance>& res) {
    cplx s(1.0, 0.0);
    for (const auto& r : res) s -= r.kappa_ex / cplx(0.5 * (r.kappa_in + r.kappa_ex), f - r.frequency);
    return s;
}

inline void check_rates(const std::vector<Resonance>& res) {
    for (const auto& r : res)
        if (!(r.kappa_in >= 0.0) || !(r.kappa_ex >= 0.0)) throw DomainError("reflection: negative loss rate");
}

inline ReflectionSpectrum reflection(const std::vector<double>& grid, const std::vector<Resonance>& res) {
    check_rates(res);
    ReflectionSpectrum out;
    out.frequencies = grid;
    out.s11.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) out.s11[i] = reflection_at(grid[i], res);
    return out;
}

inline std::vector<Resonance> bare_resonances(const AcousticModeSet& modes) {
    std::vector<Resonance> res;
    res.reserve(modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i)
        res.push_back({modes[i].frequency, modes[i].kappa_internal, modes.kappa_external(i)});
    return res;
}

inline ReflectionSpectrum bare_reflection(const std::vector<double>& grid, const AcousticModeSet& modes) {
    return reflection(grid, bare_resonances(modes));
}

inline std::vector<Resonance> hybridized_resonances(const EigenSystem& es, const std::vector<HybridRate>& rates) {
    if (rates.size() != es.dimension()) throw ShapeError("hybridized_reflection: rates not aligned to eigenvalues");
    std::vector<Resonance> res(rates.size());
    for (std::size_t k = 0; k < rates.size(); ++k) res[k] = {es.eigenvalues[k], rates[k].kappa_in, rates[k].kappa_ex};
    return res;
}

inline ReflectionSpectrum hybridized_reflection(const std::vector<double>& grid, const EigenSystem& es,
                                                const std::vector<HybridRate>& rates) {
    return reflection(grid, hybridized_resonances(es, rates));
}

/// Everything needed to model the coupled device at any bias current.
struct ResonantModel {
    AcousticModeSet modes;
    TransmonParams transmon;
    CouplingParams coupling;

    /// Eigenmode resonances with the qubit at omega_q.
    std::vector<Resonance> resonances_at(double omega_q) const {
        const EigenSystem es = diagonalize(build_interaction(modes, coupling, omega_q));
        return hybridized_resonances(es, hybridized_rates(es, modes, modes.kappa0(), transmon.gamma_intrinsic));
    }

    ReflectionSpectrum spectrum_at_current(const std::vector<double>& grid, double current) const {
        auto s = reflection(grid, resonances_at(qubit_frequency(current, transmon)));
        s.flux_bias = current;
        return s;
    }
};

/// Magnitude map |s11(I, f)|. Rows are independent and computed in parallel;
/// failures report the offending current index.
inline FluxSweepMap flux_sweep(const std::vector<double>& currents, const std::vector<double>& grid,
                               const ResonantModel& model, unsigned threads = 1) {
    if (currents.empty() || grid.empty()) throw ValidationError("flux_sweep: axes must be non-empty");
    FluxSweepMap map;
    map.currents = currents;
    map.frequencies = grid;
    map.magnitude.resize(currents.size() * grid.size());
    const std::size_t nf = grid.size();
    parallel_for(currents.size(), threads, [&](std::size_t row) {
        const auto res = model.resonances_at(qubit_frequency(currents[row], model.transmon));
        check_rates(res);
        for (std::size_t j = 0; j < nf; ++j) map.magnitude[row * nf + j] = std::abs(reflection_at(grid[j], res));
    });
    return map;
}

inline std::vector<double> linear_grid(double start, double stop, std::size_t points) {
    if (points == 0) return {};
    if (points == 1) return {start};
    std::vector<double> g(points);
    for (std::size_t i = 0; i < points; ++i)
        g[i] = start + (stop - start) * static_cast<double>(i) / static_cast<double>(points - 1);
    return g;
}

} // namespace cqad
