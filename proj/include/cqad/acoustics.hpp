#pragma once

// Qubit-IDT physics: first-principles coupling estimate from geometry and
// materials, and the spontaneous phonon emission rate through the IDT.

#include <cmath>
#include <optional>
#include <vector>

#include "cqad/core.hpp"

namespace cqad {

struct IdtGeometry {
    int N_q = 24;                  // qubit-IDT finger periods
    int N_c = 80;                  // cavity-IDT finger periods
    double finger_edge_spacing = 2880.0 / (8.0 * 4.253e9); // s = lambda_a / 8
    double L_eff = 300e-6;         // m
    double x0 = 75e-6;             // qubit-IDT center measured from the cavity edge
    double W = 50e-6;              // cavity width
    std::optional<double> area;    // effective area; W * L_eff when unset
    std::vector<int> connectivity; // +/-1 per finger edge (8 N_q); split-finger pattern when empty

    double effective_area() const { return area.value_or(W * L_eff); }

    /// Center frequency of the finger periodicity, v_s / (8 s).
    double periodicity_frequency(double v_s) const { return v_s / (8.0 * finger_edge_spacing); }

    void validate() const {
        if (N_q < 1 || N_c < 1) throw ValidationError("finger period counts must be >= 1");
        if (!(finger_edge_spacing > 0 && L_eff > 0 && W > 0)) throw ValidationError("IDT geometry must be positive");
        if (area && !(*area > 0)) throw ValidationError("effective area must be positive");
        for (int p : connectivity)
            if (p != 1 && p != -1) throw ValidationError("connectivity entries must be +1 or -1");
    }
};

struct EnergyScales {
    double E_J = 17.42e9;   // Hz
    double E_C = 200e6;     // Hz
    double beta = 1.0;
    double K2 = 7e-4;       // piezoelectric coupling coefficient
    double C_s = 1.2e-10;   // F/m, capacitance per unit finger length
    double L_j = 9.39e-9;   // H
    double C_IDT = 100e-15; // F

    void validate() const {
        if (!(E_J > 0 && E_C > 0 && K2 > 0 && C_s > 0 && L_j > 0 && C_IDT > 0))
            throw ValidationError("energy scales must be positive");
        if (!(beta > 0 && beta <= 1)) throw ValidationError("beta must lie in (0, 1]");
    }
};

/// Zero-point surface voltage of one cavity mode, (e_pz/eps) sqrt(hbar / (2 D v_s A)).
inline double zero_point_voltage(const PhysicalConstants& c, double area, double v_s) {
    return c.e_pz / c.epsilon * std::sqrt(c.hbar / (2.0 * c.density * v_s * area));
}

/// Charge fluctuation amplitude across the qubit IDT, 2 e beta / sqrt(2) (E_J / 8 E_C)^(1/4).
inline double charge_fluctuation(double E_J, double E_C, double beta, double e = PhysicalConstants{}.e) {
    if (!(E_J > 0) || !(E_C > 0)) throw DomainError("charge_fluctuation: E_J and E_C must be positive");
    return 2.0 * e * beta / std::sqrt(2.0) * std::pow(E_J / (8.0 * E_C), 0.25);
}

/// [sin(pi/8) + sin(3 pi/8)] / 2, the split-finger unit-cell factor.
inline const double kSplitFingerFactor = 0.5 * (std::sin(kPi / 8.0) + std::sin(3.0 * kPi / 8.0));

/// Edge signs for a split-finger IDT, symmetric about the IDT center.
inline std::vector<int> split_finger_connectivity(int periods) {
    static constexpr int cell[8] = {1, 1, -1, -1, -1, -1, 1, 1};
    std::vector<int> p(static_cast<std::size_t>(8 * periods));
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = cell[i % 8];
    return p;
}

struct ArrayFactor {
    double exact = 0.0;   // direct sum over finger edges
    double closed = 0.0;  // unit-cell factor * sin(m pi x0 / L) * sinc envelope
};

/// Overlap between the finger-edge charges and the standing wave of mode m.
inline ArrayFactor array_factor(int mode_m, const IdtGeometry& geom, double f_m, double v_s = 2880.0) {
    const std::size_t edges = static_cast<std::size_t>(8 * geom.N_q);
    const std::vector<int> p = geom.connectivity.empty() ? split_finger_connectivity(geom.N_q) : geom.connectivity;
    if (p.size() != edges)
        throw ShapeError("connectivity has " + std::to_string(p.size()) + " entries, expected " +
                         std::to_string(edges));
    const double k = mode_m * kPi / geom.L_eff;
    const double mid = 0.5 * static_cast<double>(edges - 1);
    double sum = 0.0;
    for (std::size_t i = 0; i < edges; ++i) {
        const double x = geom.x0 + geom.finger_edge_spacing * (static_cast<double>(i) - mid);
        sum += std::sin(k * x) * p[i];
    }
    ArrayFactor af;
    af.exact = sum / static_cast<double>(edges);
    const double f_a = geom.periodicity_frequency(v_s);
    af.closed = kSplitFingerFactor * std::sin(mode_m * kPi * geom.x0 / geom.L_eff) *
                sinc(kPi * geom.N_q * (f_a - f_m) / f_a);
    return af;
}

/// First-principles signed coupling of mode m in Hz, Phi0 Q0 S_m / hbar / 2 pi.
inline double coupling_estimate(int mode_m, const IdtGeometry& geom, const EnergyScales& scales,
                                const PhysicalConstants& consts, bool closed_form = false) {
    const double f_m = mode_m * consts.v_s / (2.0 * geom.L_eff);
    const ArrayFactor af = array_factor(mode_m, geom, f_m, consts.v_s);
    const double phi0 = zero_point_voltage(consts, geom.effective_area(), consts.v_s);
    const double q0 = charge_fluctuation(scales.E_J, scales.E_C, scales.beta, consts.e);
    return phi0 * q0 * (closed_form ? af.closed : af.exact) / consts.hbar / (2.0 * kPi);
}

/// Largest attainable |g| (unit array factor envelope), Hz.
inline double peak_coupling_estimate(const IdtGeometry& geom, const EnergyScales& scales,
                                     const PhysicalConstants& consts) {
    const double phi0 = zero_point_voltage(consts, geom.effective_area(), consts.v_s);
    const double q0 = charge_fluctuation(scales.E_J, scales.E_C, scales.beta, consts.e);
    return phi0 * q0 * kSplitFingerFactor / consts.hbar / (2.0 * kPi);
}

struct EmissionParams {
    int N_q = 24;
    double f_c = 4.253e9;
    double K2 = 7e-4;
};

/// Peak emission rate Gamma_max / 2pi = 1.3 K^2 N_q f_c / (2 sqrt 2), Hz.
inline double emission_rate_max(int N_q, double f_c, double K2) {
    return 1.3 * K2 * N_q * f_c / (2.0 * std::sqrt(2.0));
}

/// Phonon emission rate through the qubit IDT, Gamma_max (sin X / X)^2 with
/// X = N_q pi (f - f_c) / f_c. Returned as Gamma / 2pi in Hz.
inline double emission_rate(double f, int N_q, double f_c, double K2) {
    if (!(f > 0.0)) throw DomainError("emission_rate: frequency must be positive");
    const double s = sinc(N_q * kPi * (f - f_c) / f_c);
    return emission_rate_max(N_q, f_c, K2) * s * s;
}

inline double emission_rate(double f, const EmissionParams& e) { return emission_rate(f, e.N_q, e.f_c, e.K2); }

/// Radiation conductance G(f) = 2 pi 1.3 K^2 N_q^2 f_c W C_s (sin X / X)^2, siemens.
inline double saw_conductance(double f, int N_q, double f_c, double K2, double W, double C_s) {
    const double s = sinc(N_q * kPi * (f - f_c) / f_c);
    return 2.0 * kPi * 1.3 * K2 * N_q * N_q * f_c * W * C_s * s * s;
}

inline double qubit_linewidth(double f, double gamma_intrinsic, const EmissionParams& e) {
    if (!(gamma_intrinsic >= 0.0)) throw DomainError("qubit_linewidth: gamma_intrinsic must be >= 0");
    return emission_rate(f, e) + gamma_intrinsic;
}

} // namespace cqad
