#pragma once

// JSON run configuration: a "device" section (physics) and a "task" section
// (grids, windows, output). Every object is checked against its allowed keys
// before anything is computed; unknown keys are errors, missing keys take the
// defaults of the measured device.

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cqad/device.hpp"
#include "cqad/error.hpp"

namespace cqad {

using json = nlohmann::json;

inline constexpr double kEpsilon0 = 8.8541878128e-12;

struct GridSpec {
    double start = 0.0;
    double stop = 0.0;
    std::size_t points = 0;

    std::vector<double> values() const { return linear_grid(start, stop, points); }
};

struct BareSpectrumTask {
    GridSpec frequencies{4.222e9, 4.284e9, 12401};
    double noise = 0.0;   // relative complex noise added to s11, 0 = clean
};

struct FluxSweepTask {
    std::vector<GridSpec> currents;   // concatenated, then sorted
    GridSpec frequencies{4.222e9, 4.284e9, 2000};
    double noise = 0.0;   // relative noise on |s11|
};

struct ParticipationTask {
    GridSpec omega_q{4.22e9, 4.29e9, 701};
};

struct DispersiveTask {
    int mode_label = 8;
    int levels = 4;
    int n_max = 50;
    GridSpec omega_q{3.8e9, 4.9e9, 1101};
};

struct StarkTask {
    int mode_label = 8;
    int levels = 4;
    int n_max = 50;
    std::vector<double> detunings{-300e6, 150e6, 400e6};
    int max_phonons = 15;
};

struct EmissionTask {
    GridSpec frequencies{3.8e9, 4.7e9, 901};
};

struct FitTask {
    std::string kind = "auto";   // auto | bare | flux
    double prominence = 0.02;
    double smoothing_hz = 20e3;
    double min_separation_hz = 500e3;
    int first_label = 1;
    double ib_guess = 0.0;
    std::optional<double> g0_guess;
    double ib_scan_halfwidth = 5e-6;
    double ib_scan_step = 0.5e-6;
    int phi_scan_points = 12;
};

struct TaskConfig {
    std::string output_dir = "out";
    std::uint64_t seed = 0;
    BareSpectrumTask bare_spectrum;
    FluxSweepTask flux_sweep;
    ParticipationTask participation;
    DispersiveTask dispersive;
    StarkTask stark;
    EmissionTask emission;
    FitTask fit;
};

struct RunConfig {
    Device device;
    TaskConfig task;
};

/// Flux windows bracketing the two mirror-image crossing sets of the default device.
inline std::vector<GridSpec> default_current_windows(double I0) {
    return {{-0.2585 * I0, -0.2465 * I0, 100}, {0.2465 * I0, 0.2585 * I0, 100}};
}

namespace config_detail {

inline void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path + ": expected an object");
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw ConfigError(path + ": unknown key '" + key + "'");
    }
}

inline void read(const json& j, const char* key, double& out, const std::string& path) {
    if (!j.contains(key)) return;
    if (!j[key].is_number()) throw ConfigError(path + "." + key + ": expected a number");
    out = j[key].get<double>();
}

inline void read(const json& j, const char* key, int& out, const std::string& path) {
    if (!j.contains(key)) return;
    if (!j[key].is_number_integer()) throw ConfigError(path + "." + key + ": expected an integer");
    out = j[key].get<int>();
}

inline void read(const json& j, const char* key, std::uint64_t& out, const std::string& path) {
    if (!j.contains(key)) return;
    if (!j[key].is_number_unsigned() && !(j[key].is_number_integer() && j[key].get<long long>() >= 0))
        throw ConfigError(path + "." + key + ": expected a non-negative integer");
    out = j[key].get<std::uint64_t>();
}

inline void read(const json& j, const char* key, std::string& out, const std::string& path) {
    if (!j.contains(key)) return;
    if (!j[key].is_string()) throw ConfigError(path + "." + key + ": expected a string");
    out = j[key].get<std::string>();
}

inline void read(const json& j, const char* key, std::vector<double>& out, const std::string& path) {
    if (!j.contains(key)) return;
    if (!j[key].is_array()) throw ConfigError(path + "." + key + ": expected an array of numbers");
    out.clear();
    for (const auto& v : j[key]) {
        if (!v.is_number()) throw ConfigError(path + "." + key + ": expected an array of numbers");
        out.push_back(v.get<double>());
    }
}

inline void read(const json& j, const char* key, std::vector<int>& out, const std::string& path) {
    if (!j.contains(key)) return;
    if (!j[key].is_array()) throw ConfigError(path + "." + key + ": expected an array of integers");
    out.clear();
    for (const auto& v : j[key]) {
        if (!v.is_number_integer()) throw ConfigError(path + "." + key + ": expected an array of integers");
        out.push_back(v.get<int>());
    }
}

inline GridSpec read_grid(const json& j, const std::string& path, GridSpec g) {
    check_keys(j, {"start", "stop", "points"}, path);
    read(j, "start", g.start, path);
    read(j, "stop", g.stop, path);
    int points = static_cast<int>(g.points);
    read(j, "points", points, path);
    if (points < 1) throw ConfigError(path + ".points: must be >= 1");
    g.points = static_cast<std::size_t>(points);
    if (g.points > 1 && !(g.stop > g.start)) throw ConfigError(path + ": stop must exceed start");
    return g;
}

inline void read_grid(const json& j, const char* key, GridSpec& g, const std::string& path) {
    if (j.contains(key)) g = read_grid(j[key], path + "." + key, g);
}

inline AcousticMode read_mode(const json& j, const std::string& path) {
    check_keys(j, {"label", "kind", "frequency", "kappa_internal", "external_amplitude", "parent"}, path);
    for (const char* req : {"label", "kind", "frequency", "kappa_internal", "external_amplitude"})
        if (!j.contains(req)) throw ConfigError(path + ": missing '" + req + "'");
    AcousticMode m;
    read(j, "label", m.label, path);
    std::string kind;
    read(j, "kind", kind, path);
    try {
        m.kind = mode_kind_from_string(kind);
    } catch (const ValidationError& e) {
        throw ConfigError(path + ".kind: " + e.what());
    }
    read(j, "frequency", m.frequency, path);
    read(j, "kappa_internal", m.kappa_internal, path);
    read(j, "external_amplitude", m.external_amplitude, path);
    if (j.contains("parent")) {
        int p = 0;
        read(j, "parent", p, path);
        m.parent = p;
    }
    return m;
}

} // namespace config_detail

inline json mode_to_json(const AcousticMode& m) {
    json j{{"label", m.label},
           {"kind", to_string(m.kind)},
           {"frequency", m.frequency},
           {"kappa_internal", m.kappa_internal},
           {"external_amplitude", m.external_amplitude}};
    if (m.parent) j["parent"] = *m.parent;
    return j;
}

inline json modes_to_json(const AcousticModeSet& s) {
    json arr = json::array();
    for (const auto& m : s.modes()) arr.push_back(mode_to_json(m));
    return arr;
}

inline Device parse_device(const json& j) {
    using namespace config_detail;
    const std::string p = "device";
    check_keys(j, {"constants", "transmon", "coupling", "cavity", "cavity_idt", "geometry", "energies", "modes"}, p);
    Device d;
    if (j.contains("constants")) {
        const auto& c = j["constants"];
        const std::string q = p + ".constants";
        check_keys(c, {"v_s", "e_pz", "epsilon_r", "density", "hbar", "e"}, q);
        read(c, "v_s", d.constants.v_s, q);
        read(c, "e_pz", d.constants.e_pz, q);
        double eps_r = d.constants.epsilon / kEpsilon0;
        read(c, "epsilon_r", eps_r, q);
        d.constants.epsilon = eps_r * kEpsilon0;
        read(c, "density", d.constants.density, q);
        read(c, "hbar", d.constants.hbar, q);
        read(c, "e", d.constants.e, q);
    }
    if (j.contains("transmon")) {
        const auto& t = j["transmon"];
        const std::string q = p + ".transmon";
        check_keys(t, {"omega_max", "I0", "Ib", "alpha", "levels", "gamma_intrinsic"}, q);
        read(t, "omega_max", d.transmon.omega_max, q);
        read(t, "I0", d.transmon.I0, q);
        read(t, "Ib", d.transmon.Ib, q);
        read(t, "alpha", d.transmon.alpha, q);
        read(t, "levels", d.transmon.levels, q);
        read(t, "gamma_intrinsic", d.transmon.gamma_intrinsic, q);
    }
    if (j.contains("coupling")) {
        const auto& c = j["coupling"];
        const std::string q = p + ".coupling";
        check_keys(c, {"g0", "phi_q", "transverse_ratio", "label_offset"}, q);
        read(c, "g0", d.coupling.g0, q);
        read(c, "phi_q", d.coupling.phi_q, q);
        read(c, "transverse_ratio", d.coupling.transverse_ratio, q);
        read(c, "label_offset", d.coupling.label_offset, q);
    }
    if (j.contains("cavity")) {
        const auto& c = j["cavity"];
        const std::string q = p + ".cavity";
        check_keys(c, {"center_frequency", "n_longitudinal", "center_label", "kappa_longitudinal", "mirror_bandwidth",
                       "spacing_tolerance", "transverse"},
                   q);
        read(c, "center_frequency", d.cavity.center_frequency, q);
        read(c, "n_longitudinal", d.cavity.n_longitudinal, q);
        read(c, "center_label", d.cavity.center_label, q);
        read(c, "kappa_longitudinal", d.cavity.kappa_longitudinal, q);
        read(c, "mirror_bandwidth", d.cavity.mirror_bandwidth, q);
        read(c, "spacing_tolerance", d.cavity.spacing_tolerance, q);
        if (c.contains("transverse")) {
            const auto& t = c["transverse"];
            const std::string r = q + ".transverse";
            check_keys(t, {"parents", "offset", "kappa"}, r);
            read(t, "parents", d.cavity.transverse.parents, r);
            read(t, "offset", d.cavity.transverse.offset, r);
            read(t, "kappa", d.cavity.transverse.kappa, r);
        }
    }
    if (j.contains("cavity_idt")) {
        const auto& c = j["cavity_idt"];
        const std::string q = p + ".cavity_idt";
        check_keys(c, {"kappa0", "phi_c", "N_c", "f_c", "transverse_ratio"}, q);
        read(c, "kappa0", d.cavity_idt.kappa0, q);
        read(c, "phi_c", d.cavity_idt.phi_c, q);
        read(c, "N_c", d.cavity_idt.N_c, q);
        read(c, "f_c", d.cavity_idt.f_c, q);
        read(c, "transverse_ratio", d.cavity_idt.transverse_ratio, q);
    }
    if (j.contains("geometry")) {
        const auto& g = j["geometry"];
        const std::string q = p + ".geometry";
        check_keys(g, {"N_q", "N_c", "finger_edge_spacing", "L_eff", "x0", "W", "area", "connectivity"}, q);
        read(g, "N_q", d.geometry.N_q, q);
        read(g, "N_c", d.geometry.N_c, q);
        read(g, "finger_edge_spacing", d.geometry.finger_edge_spacing, q);
        read(g, "L_eff", d.geometry.L_eff, q);
        read(g, "x0", d.geometry.x0, q);
        read(g, "W", d.geometry.W, q);
        if (g.contains("area")) {
            double a = 0.0;
            read(g, "area", a, q);
            d.geometry.area = a;
        }
        read(g, "connectivity", d.geometry.connectivity, q);
    }
    if (j.contains("energies")) {
        const auto& e = j["energies"];
        const std::string q = p + ".energies";
        check_keys(e, {"E_J", "E_C", "beta", "K2", "C_s", "L_j", "C_IDT"}, q);
        read(e, "E_J", d.energies.E_J, q);
        read(e, "E_C", d.energies.E_C, q);
        read(e, "beta", d.energies.beta, q);
        read(e, "K2", d.energies.K2, q);
        read(e, "C_s", d.energies.C_s, q);
        read(e, "L_j", d.energies.L_j, q);
        read(e, "C_IDT", d.energies.C_IDT, q);
    }
    try {
        if (j.contains("modes")) {
            if (!j["modes"].is_array()) throw ConfigError("device.modes: expected an array");
            if (j["modes"].empty()) throw ConfigError("device.modes: mode list must not be empty");
            std::vector<AcousticMode> modes;
            for (std::size_t i = 0; i < j["modes"].size(); ++i)
                modes.push_back(read_mode(j["modes"][i], "device.modes[" + std::to_string(i) + "]"));
            d.modes = AcousticModeSet(std::move(modes), d.fsr_hz(), d.cavity.center_frequency, d.cavity.mirror_bandwidth,
                                      d.cavity_idt.kappa0, d.cavity.spacing_tolerance);
        } else {
            d.rebuild_modes();
        }
        d.validate();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(std::string("device: ") + e.what());
    }
    return d;
}

inline TaskConfig parse_task(const json& j, const Device& d) {
    using namespace config_detail;
    TaskConfig t;
    t.flux_sweep.currents = default_current_windows(d.transmon.I0);
    const std::string p = "task";
    check_keys(j, {"output_dir", "seed", "bare_spectrum", "flux_sweep", "participation", "dispersive", "stark", "emission",
                   "fit"},
               p);
    read(j, "output_dir", t.output_dir, p);
    read(j, "seed", t.seed, p);
    if (j.contains("bare_spectrum")) {
        const auto& s = j["bare_spectrum"];
        const std::string q = p + ".bare_spectrum";
        check_keys(s, {"frequencies", "noise"}, q);
        read_grid(s, "frequencies", t.bare_spectrum.frequencies, q);
        read(s, "noise", t.bare_spectrum.noise, q);
    }
    if (j.contains("flux_sweep")) {
        const auto& s = j["flux_sweep"];
        const std::string q = p + ".flux_sweep";
        check_keys(s, {"currents", "frequencies", "noise"}, q);
        if (s.contains("currents")) {
            if (!s["currents"].is_array() || s["currents"].empty())
                throw ConfigError(q + ".currents: expected a non-empty array of windows");
            t.flux_sweep.currents.clear();
            for (std::size_t i = 0; i < s["currents"].size(); ++i)
                t.flux_sweep.currents.push_back(
                    read_grid(s["currents"][i], q + ".currents[" + std::to_string(i) + "]", GridSpec{}));
        }
        read_grid(s, "frequencies", t.flux_sweep.frequencies, q);
        read(s, "noise", t.flux_sweep.noise, q);
    }
    if (j.contains("participation")) {
        const auto& s = j["participation"];
        check_keys(s, {"omega_q"}, p + ".participation");
        read_grid(s, "omega_q", t.participation.omega_q, p + ".participation");
    }
    if (j.contains("dispersive")) {
        const auto& s = j["dispersive"];
        const std::string q = p + ".dispersive";
        check_keys(s, {"mode_label", "levels", "n_max", "omega_q"}, q);
        read(s, "mode_label", t.dispersive.mode_label, q);
        read(s, "levels", t.dispersive.levels, q);
        read(s, "n_max", t.dispersive.n_max, q);
        read_grid(s, "omega_q", t.dispersive.omega_q, q);
    }
    if (j.contains("stark")) {
        const auto& s = j["stark"];
        const std::string q = p + ".stark";
        check_keys(s, {"mode_label", "levels", "n_max", "detunings", "max_phonons"}, q);
        read(s, "mode_label", t.stark.mode_label, q);
        read(s, "levels", t.stark.levels, q);
        read(s, "n_max", t.stark.n_max, q);
        read(s, "detunings", t.stark.detunings, q);
        read(s, "max_phonons", t.stark.max_phonons, q);
    }
    if (j.contains("emission")) {
        const auto& s = j["emission"];
        check_keys(s, {"frequencies"}, p + ".emission");
        read_grid(s, "frequencies", t.emission.frequencies, p + ".emission");
    }
    if (j.contains("fit")) {
        const auto& s = j["fit"];
        const std::string q = p + ".fit";
        check_keys(s, {"kind", "prominence", "smoothing_hz", "min_separation_hz", "first_label", "ib_guess", "g0_guess",
                       "ib_scan_halfwidth", "ib_scan_step", "phi_scan_points"},
                   q);
        read(s, "kind", t.fit.kind, q);
        if (t.fit.kind != "auto" && t.fit.kind != "bare" && t.fit.kind != "flux")
            throw ConfigError(q + ".kind: expected auto, bare or flux");
        read(s, "prominence", t.fit.prominence, q);
        read(s, "smoothing_hz", t.fit.smoothing_hz, q);
        read(s, "min_separation_hz", t.fit.min_separation_hz, q);
        read(s, "first_label", t.fit.first_label, q);
        read(s, "ib_guess", t.fit.ib_guess, q);
        if (s.contains("g0_guess")) {
            double g = 0.0;
            read(s, "g0_guess", g, q);
            t.fit.g0_guess = g;
        }
        read(s, "ib_scan_halfwidth", t.fit.ib_scan_halfwidth, q);
        read(s, "ib_scan_step", t.fit.ib_scan_step, q);
        read(s, "phi_scan_points", t.fit.phi_scan_points, q);
    }
    if (t.dispersive.levels < 2 || t.dispersive.levels > 6 || t.stark.levels < 2 || t.stark.levels > 6)
        throw ConfigError("task: levels must lie in [2, 6]");
    if (t.stark.max_phonons < 1 || t.stark.max_phonons > t.stark.n_max - t.stark.levels)
        throw ConfigError("task.stark.max_phonons: must lie in [1, n_max - levels]");
    return t;
}

inline RunConfig parse_config(const json& j) {
    config_detail::check_keys(j, {"device", "task"}, "config");
    RunConfig rc;
    rc.device = j.contains("device") ? parse_device(j["device"]) : default_device();
    rc.task = parse_task(j.contains("task") ? j["task"] : json::object(), rc.device);
    return rc;
}

inline RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config '" + path.string() + "' is not valid JSON: " + e.what());
    }
    return parse_config(j);
}

/// Full device description in the config schema, with the mode table written out.
inline json device_to_json(const Device& d) {
    json j;
    j["constants"] = {{"v_s", d.constants.v_s},         {"e_pz", d.constants.e_pz},
                      {"epsilon_r", d.constants.epsilon / kEpsilon0},
                      {"density", d.constants.density}, {"hbar", d.constants.hbar},
                      {"e", d.constants.e}};
    j["transmon"] = {{"omega_max", d.transmon.omega_max}, {"I0", d.transmon.I0},
                     {"Ib", d.transmon.Ib},               {"alpha", d.transmon.alpha},
                     {"levels", d.transmon.levels},       {"gamma_intrinsic", d.transmon.gamma_intrinsic}};
    j["coupling"] = {{"g0", d.coupling.g0},
                     {"phi_q", d.coupling.phi_q},
                     {"transverse_ratio", d.coupling.transverse_ratio},
                     {"label_offset", d.coupling.label_offset}};
    j["cavity"] = {{"center_frequency", d.cavity.center_frequency},
                   {"n_longitudinal", d.cavity.n_longitudinal},
                   {"center_label", d.cavity.center_label},
                   {"kappa_longitudinal", d.cavity.kappa_longitudinal},
                   {"mirror_bandwidth", d.cavity.mirror_bandwidth},
                   {"spacing_tolerance", d.cavity.spacing_tolerance},
                   {"transverse",
                    {{"parents", d.cavity.transverse.parents},
                     {"offset", d.cavity.transverse.offset},
                     {"kappa", d.cavity.transverse.kappa}}}};
    j["cavity_idt"] = {{"kappa0", d.cavity_idt.kappa0},
                       {"phi_c", d.cavity_idt.phi_c},
                       {"N_c", d.cavity_idt.N_c},
                       {"f_c", d.cavity_idt.f_c},
                       {"transverse_ratio", d.cavity_idt.transverse_ratio}};
    j["geometry"] = {{"N_q", d.geometry.N_q},     {"N_c", d.geometry.N_c},
                     {"finger_edge_spacing", d.geometry.finger_edge_spacing},
                     {"L_eff", d.geometry.L_eff}, {"x0", d.geometry.x0},
                     {"W", d.geometry.W}};
    if (d.geometry.area) j["geometry"]["area"] = *d.geometry.area;
    if (!d.geometry.connectivity.empty()) j["geometry"]["connectivity"] = d.geometry.connectivity;
    j["energies"] = {{"E_J", d.energies.E_J}, {"E_C", d.energies.E_C}, {"beta", d.energies.beta},
                     {"K2", d.energies.K2},   {"C_s", d.energies.C_s}, {"L_j", d.energies.L_j},
                     {"C_IDT", d.energies.C_IDT}};
    j["modes"] = modes_to_json(d.modes);
    return j;
}

} // namespace cqad
