#pragma once

// Domain types and elementary relations for a flux-tunable transmon coupled
// to a multimode surface-acoustic-wave cavity.
//
// Unit convention: every stored or returned rate/frequency is a linear
// frequency in Hz. Angular frequencies only appear inside formulas.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cqad/error.hpp"

namespace cqad {

inline constexpr double kPi = std::numbers::pi;

enum class ModeKind { longitudinal, transverse };

inline std::string to_string(ModeKind k) {
    return k == ModeKind::longitudinal ? "longitudinal" : "transverse";
}

inline ModeKind mode_kind_from_string(const std::string& s) {
    if (s == "longitudinal") return ModeKind::longitudinal;
    if (s == "transverse") return ModeKind::transverse;
    throw ValidationError("unknown mode kind '" + s + "'");
}

struct AcousticMode {
    int label = 0;                       // display index, 1..11 for the device
    ModeKind kind = ModeKind::longitudinal;
    double frequency = 0.0;              // Hz
    double kappa_internal = 0.0;         // Hz, full width
    double external_amplitude = 0.0;     // signed a_m, kappa_ex = kappa0 * a_m^2
    std::optional<int> parent;           // longitudinal label a transverse mode hangs off

    bool operator==(const AcousticMode&) const = default;
};

/// Ordered, validated collection of bare cavity modes.
///
/// Modes are kept sorted by frequency. Longitudinal modes must be strictly
/// increasing and spaced by `fsr` to within `spacing_tolerance` (relative);
/// every transverse mode must name an existing longitudinal parent.
class AcousticModeSet {
public:
    AcousticModeSet() = default;

    AcousticModeSet(std::vector<AcousticMode> modes, double fsr, double center_frequency,
                    double mirror_bandwidth, double kappa0, double spacing_tolerance = 0.01)
        : modes_(std::move(modes)),
          fsr_(fsr),
          center_frequency_(center_frequency),
          mirror_bandwidth_(mirror_bandwidth),
          kappa0_(kappa0),
          spacing_tolerance_(spacing_tolerance) {
        std::stable_sort(modes_.begin(), modes_.end(),
                         [](const AcousticMode& a, const AcousticMode& b) { return a.frequency < b.frequency; });
        validate();
    }

    const std::vector<AcousticMode>& modes() const { return modes_; }
    std::size_t size() const { return modes_.size(); }
    bool empty() const { return modes_.empty(); }
    const AcousticMode& operator[](std::size_t i) const { return modes_[i]; }

    double fsr() const { return fsr_; }
    double center_frequency() const { return center_frequency_; }
    double mirror_bandwidth() const { return mirror_bandwidth_; }
    double kappa0() const { return kappa0_; }
    double spacing_tolerance() const { return spacing_tolerance_; }

    double kappa_external(std::size_t i) const {
        const double a = modes_[i].external_amplitude;
        return kappa0_ * a * a;
    }

    std::optional<std::size_t> find(int label, ModeKind kind) const {
        for (std::size_t i = 0; i < modes_.size(); ++i)
            if (modes_[i].label == label && modes_[i].kind == kind) return i;
        return std::nullopt;
    }

    bool operator==(const AcousticModeSet&) const = default;

private:
    void validate() const {
        if (kappa0_ < 0.0) throw ValidationError("kappa0 must be non-negative");
        if (spacing_tolerance_ < 0.0) throw ValidationError("spacing tolerance must be non-negative");
        const AcousticMode* prev = nullptr;
        for (const auto& m : modes_) {
            if (!(m.frequency > 0.0))
                throw ValidationError("mode " + std::to_string(m.label) + ": frequency must be positive");
            if (!(m.kappa_internal >= 0.0))
                throw ValidationError("mode " + std::to_string(m.label) + ": kappa_internal must be >= 0");
            if (m.kind == ModeKind::transverse) {
                if (!m.parent)
                    throw ValidationError("transverse mode " + std::to_string(m.label) + " has no parent");
                bool found = false;
                for (const auto& p : modes_)
                    found = found || (p.kind == ModeKind::longitudinal && p.label == *m.parent);
                if (!found)
                    throw ValidationError("transverse mode parent " + std::to_string(*m.parent) + " not found");
                continue;
            }
            if (prev) {
                const double spacing = m.frequency - prev->frequency;
                if (!(spacing > 0.0))
                    throw ValidationError("longitudinal modes must be strictly increasing in frequency");
                if (fsr_ > 0.0 && std::abs(spacing - fsr_) > spacing_tolerance_ * fsr_)
                    throw ValidationError("longitudinal spacing " + std::to_string(spacing) +
                                          " Hz deviates from fsr " + std::to_string(fsr_) + " Hz");
            }
            prev = &m;
        }
    }

    std::vector<AcousticMode> modes_;
    double fsr_ = 0.0;
    double center_frequency_ = 0.0;
    double mirror_bandwidth_ = 0.0;
    double kappa0_ = 0.0;
    double spacing_tolerance_ = 0.01;
};

struct TransmonParams {
    double omega_max = 5.08e9;     // Hz
    double I0 = 1.0395e-3;         // A per flux quantum
    double Ib = 0.0;               // A
    double alpha = 273e6;          // Hz, positive magnitude
    int levels = 4;
    double gamma_intrinsic = 1.1e6; // Hz

    void validate() const {
        if (!(omega_max > 0.0)) throw ValidationError("omega_max must be positive");
        if (!(I0 > 0.0)) throw ValidationError("I0 must be positive");
        if (!(alpha >= 0.0)) throw ValidationError("alpha must be >= 0");
        if (levels < 2 || levels > 6) throw ValidationError("levels must lie in [2, 6]");
        if (!(gamma_intrinsic >= 0.0)) throw ValidationError("gamma_intrinsic must be >= 0");
    }
};

struct CouplingParams {
    double g0 = 6.5e6;            // Hz
    double phi_q = -0.1;          // rad
    double transverse_ratio = 0.35;
    int label_offset = 2;         // model index m = label + label_offset

    void validate() const {
        if (!(g0 >= 0.0)) throw ValidationError("g0 must be >= 0");
        if (!(std::abs(phi_q) < kPi)) throw ValidationError("|phi_q| must be < pi");
        if (!(transverse_ratio >= 0.0 && transverse_ratio <= 1.0))
            throw ValidationError("transverse_ratio must lie in [0, 1]");
    }
};

/// SI constants plus GaAs material values (literature numbers, not device fits).
struct PhysicalConstants {
    double v_s = 2880.0;              // m/s
    double e_pz = 0.16;               // C/m^2, GaAs e14
    double epsilon = 12.9 * 8.8541878128e-12; // F/m
    double density = 5317.0;          // kg/m^3
    double hbar = 1.054571817e-34;    // J s
    double e = 1.602176634e-19;       // C

    void validate() const {
        if (!(v_s > 0 && e_pz > 0 && epsilon > 0 && density > 0 && hbar > 0 && e > 0))
            throw ValidationError("physical constants must all be strictly positive");
    }
};

/// cos(pi x), exact at the zeros x = k + 1/2.
inline double cos_pi(double x) {
    const double r = std::abs(x - 2.0 * std::nearbyint(0.5 * x));
    return std::sin(kPi * (0.5 - r));
}

/// Flux-tuned 0-1 transition: omega_max * sqrt|cos(pi (I - Ib) / I0)|.
inline double qubit_frequency(double current, const TransmonParams& p) {
    return p.omega_max * std::sqrt(std::abs(cos_pi((current - p.Ib) / p.I0)));
}

/// Bare transmon level i, relative to the ground state. The quadratic
/// anharmonic term lowers the levels; alpha is the positive magnitude.
inline double transmon_level(int i, double omega_q, double alpha, int levels = 6) {
    if (i < 0 || i >= levels)
        throw DomainError("transmon level index " + std::to_string(i) + " outside [0, " +
                          std::to_string(levels) + ")");
    return i * omega_q - 0.5 * i * (i - 1) * alpha;
}

inline double fsr(double v_s, double L_eff) {
    if (!(v_s > 0.0) || !(L_eff > 0.0)) throw DomainError("fsr: arguments must be positive");
    return v_s / (2.0 * L_eff);
}

inline double wavelength(double v_s, double f_c) {
    if (!(v_s > 0.0) || !(f_c > 0.0)) throw DomainError("wavelength: arguments must be positive");
    return v_s / f_c;
}

/// sin(x)/x with the removable singularity filled in.
inline double sinc(double x) {
    if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

} // namespace cqad
