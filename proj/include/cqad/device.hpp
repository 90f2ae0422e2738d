#pragma once

// Full device description and the default parameter set of the measured
// GaAs device (11 longitudinal + 6 transverse modes, 4.253 GHz center).

#include <vector>

#include "cqad/acoustics.hpp"
#include "cqad/core.hpp"
#include "cqad/reflection.hpp"

namespace cqad {

struct TransverseSpec {
    std::vector<int> parents{3, 4, 5, 6, 7, 8};
    double offset = 1.5e6;    // Hz above the parent longitudinal mode
    double kappa = 400e3;     // Hz
};

/// Generator for a uniformly spaced cavity spectrum.
struct CavitySpec {
    double center_frequency = 4.253e9;
    int n_longitudinal = 11;
    int center_label = 6;          // label sitting at center_frequency
    double kappa_longitudinal = 200e3;
    double mirror_bandwidth = 50e6;
    double spacing_tolerance = 0.01;
    TransverseSpec transverse;
};

/// Builds the mode table from the cavity generator; external amplitudes come
/// from the cavity-IDT model evaluated at model index label + label_offset.
inline AcousticModeSet make_mode_set(const CavitySpec& cav, const CavityIdt& idt, double fsr_hz, int label_offset) {
    if (cav.n_longitudinal < 1) throw ValidationError("cavity needs at least one longitudinal mode");
    std::vector<AcousticMode> modes;
    auto amplitude = [&](int label, double f) {
        return external_amplitude(label + label_offset, f, idt.kappa0, idt.phi_c, idt.N_c, idt.f_c).amplitude;
    };
    for (int label = 1; label <= cav.n_longitudinal; ++label) {
        const double f = cav.center_frequency + (label - cav.center_label) * fsr_hz;
        modes.push_back({label, ModeKind::longitudinal, f, cav.kappa_longitudinal, amplitude(label, f), std::nullopt});
    }
    for (int parent : cav.transverse.parents) {
        if (parent < 1 || parent > cav.n_longitudinal)
            throw ValidationError("transverse parent " + std::to_string(parent) + " out of range");
        const double fp = cav.center_frequency + (parent - cav.center_label) * fsr_hz;
        modes.push_back({parent, ModeKind::transverse, fp + cav.transverse.offset, cav.transverse.kappa,
                         idt.transverse_ratio * amplitude(parent, fp), parent});
    }
    return AcousticModeSet(std::move(modes), fsr_hz, cav.center_frequency, cav.mirror_bandwidth, idt.kappa0,
                           cav.spacing_tolerance);
}

struct Device {
    PhysicalConstants constants;
    TransmonParams transmon;
    CouplingParams coupling;
    CavitySpec cavity;
    CavityIdt cavity_idt;
    IdtGeometry geometry;
    EnergyScales energies;
    AcousticModeSet modes;

    ResonantModel resonant_model() const { return {modes, transmon, coupling}; }

    EmissionParams emission() const { return {geometry.N_q, cavity_idt.f_c, energies.K2}; }

    double fsr_hz() const { return fsr(constants.v_s, geometry.L_eff); }

    void rebuild_modes() { modes = make_mode_set(cavity, cavity_idt, fsr_hz(), coupling.label_offset); }

    void validate() const {
        constants.validate();
        transmon.validate();
        coupling.validate();
        geometry.validate();
        energies.validate();
        if (modes.empty()) throw ValidationError("device has no acoustic modes");
    }
};

inline Device default_device() {
    Device d;
    d.rebuild_modes();
    return d;
}

} // namespace cqad
