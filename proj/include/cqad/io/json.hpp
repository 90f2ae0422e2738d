#pragma once

// JSON views of fit results, eigensystems and mode tables. Non-finite
// numbers (an unidentifiable parameter has an infinite error) become null.

#include <cmath>
#include <limits>

#include "cqad/config.hpp"
#include "cqad/fitting.hpp"
#include "cqad/io/csv.hpp"
#include "cqad/spectral.hpp"

namespace cqad::io {

inline json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

inline double number_from(const json& j) {
    if (j.is_null()) return std::numeric_limits<double>::infinity();
    if (!j.is_number()) throw IoError("expected a number or null");
    return j.get<double>();
}

inline json to_json(const FitResult& r) {
    json params = json::object();
    for (const auto& [name, p] : r.parameters) params[name] = {{"value", number_or_null(p.value)}, {"error", number_or_null(p.error)}};
    json hist = json::array();
    for (double s : r.ssr_history) hist.push_back(number_or_null(s));
    return {{"parameters", params},     {"residual_norm", number_or_null(r.residual_norm)},
            {"iterations", r.iterations}, {"converged", r.converged},
            {"method", r.method},        {"message", r.message},
            {"warnings", r.warnings},    {"ssr_history", hist}};
}

inline FitResult fit_result_from_json(const json& j) {
    try {
        FitResult r;
        for (const auto& [name, p] : j.at("parameters").items())
            r.parameters[name] = {number_from(p.at("value")), number_from(p.at("error"))};
        r.residual_norm = number_from(j.at("residual_norm"));
        r.iterations = j.at("iterations").get<int>();
        r.converged = j.at("converged").get<bool>();
        r.method = j.at("method").get<std::string>();
        r.message = j.at("message").get<std::string>();
        r.warnings = j.at("warnings").get<std::vector<std::string>>();
        for (const auto& s : j.at("ssr_history")) r.ssr_history.push_back(number_from(s));
        return r;
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed fit result: ") + e.what());
    }
}

inline json to_json(const BareFit& f) {
    json modes = json::array();
    for (const auto& m : f.modes) {
        json jm{{"label", m.label},
                {"kind", to_string(m.kind)},
                {"frequency", m.frequency},
                {"kappa_internal", m.kappa_in},
                {"kappa_external", m.kappa_ex},
                {"sigma_frequency", number_or_null(m.sigma_frequency)},
                {"sigma_kappa_internal", number_or_null(m.sigma_kappa_in)},
                {"sigma_kappa_external", number_or_null(m.sigma_kappa_ex)}};
        if (m.parent) jm["parent"] = *m.parent;
        modes.push_back(jm);
    }
    return {{"kind", "bare"}, {"result", to_json(f.summary())}, {"modes", modes}, {"dips", to_json(f.dips)},
            {"N_c", f.N_c},   {"label_offset", f.label_offset}};
}

inline json to_json(const EigenSystem& es) {
    json vecs = json::array();
    for (Eigen::Index k = 0; k < es.eigenvectors.cols(); ++k) {
        json col = json::array();
        for (Eigen::Index i = 0; i < es.eigenvectors.rows(); ++i) col.push_back(es.eigenvectors(i, k));
        vecs.push_back(col);
    }
    return {{"eigenvalues", es.eigenvalues}, {"eigenvectors", vecs}, {"qubit_participation", es.qubit_participation}};
}

inline json to_json(const AcousticModeSet& s) {
    return {{"fsr", s.fsr()},
            {"center_frequency", s.center_frequency()},
            {"mirror_bandwidth", s.mirror_bandwidth()},
            {"kappa0", s.kappa0()},
            {"spacing_tolerance", s.spacing_tolerance()},
            {"modes", modes_to_json(s)}};
}

inline AcousticModeSet mode_set_from_json(const json& j) {
    config_detail::check_keys(j, {"fsr", "center_frequency", "mirror_bandwidth", "kappa0", "spacing_tolerance", "modes"},
                              "mode_set");
    for (const char* k : {"fsr", "center_frequency", "mirror_bandwidth", "kappa0", "modes"})
        if (!j.contains(k)) throw ConfigError(std::string("mode_set: missing '") + k + "'");
    double fsr_hz = 0, fc = 0, bw = 0, k0 = 0, tol = 0.01;
    config_detail::read(j, "fsr", fsr_hz, "mode_set");
    config_detail::read(j, "center_frequency", fc, "mode_set");
    config_detail::read(j, "mirror_bandwidth", bw, "mode_set");
    config_detail::read(j, "kappa0", k0, "mode_set");
    config_detail::read(j, "spacing_tolerance", tol, "mode_set");
    if (!j["modes"].is_array()) throw ConfigError("mode_set.modes: expected an array");
    std::vector<AcousticMode> modes;
    for (std::size_t i = 0; i < j["modes"].size(); ++i)
        modes.push_back(config_detail::read_mode(j["modes"][i], "mode_set.modes[" + std::to_string(i) + "]"));
    return AcousticModeSet(std::move(modes), fsr_hz, fc, bw, k0, tol);
}

inline void write_json(const std::filesystem::path& path, const json& j) { write_atomic(path, j.dump(2) + "\n"); }

inline json read_json(const std::filesystem::path& path) {
    try {
        return json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw IoError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

} // namespace cqad::io
