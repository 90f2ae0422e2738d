#pragma once

// The work behind each CLI subcommand. Every command reads a RunConfig,
// writes its files atomically into the output directory and returns the
// paths it wrote. Noise, when requested, is seeded so that a fixed config
// and seed reproduce the same bytes.

#include <complex>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "cqad/acoustics.hpp"
#include "cqad/config.hpp"
#include "cqad/dispersive.hpp"
#include "cqad/fitting.hpp"
#include "cqad/io/csv.hpp"
#include "cqad/io/json.hpp"
#include "cqad/io/svg.hpp"
#include "cqad/parallel.hpp"
#include "cqad/spectral.hpp"

namespace cqad {

struct RunOptions {
    std::filesystem::path out_dir = "out";
    unsigned threads = 1;
    std::uint64_t seed = 0;
};

using Written = std::vector<std::filesystem::path>;

/// Complex multiplicative noise s -> s (1 + sigma n), n unit-variance complex Gaussian.
inline void add_complex_noise(std::vector<cplx>& s, double sigma, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0 / std::sqrt(2.0));
    for (auto& v : s) {
        const double re = n(rng), im = n(rng);
        v *= cplx(1.0 + sigma * re, sigma * im);
    }
}

inline void add_magnitude_noise(std::vector<double>& m, double sigma, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    for (auto& v : m) v *= 1.0 + sigma * n(rng);
}

inline std::vector<double> sweep_currents(const FluxSweepTask& t) {
    std::vector<double> out;
    for (const auto& w : t.currents) {
        const auto v = w.values();
        out.insert(out.end(), v.begin(), v.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// JC parameters for the cavity mode `label` of the device.
inline JCParams jc_for_mode(const Device& d, int label, int levels, int n_max) {
    const auto idx = d.modes.find(label, ModeKind::longitudinal);
    if (!idx) throw ConfigError("no longitudinal mode with label " + std::to_string(label));
    JCParams p;
    p.omega_cav = d.modes[*idx].frequency;
    p.g = std::abs(coupling_strength(label, ModeKind::longitudinal, d.coupling));
    p.alpha = d.transmon.alpha;
    p.levels = levels;
    p.n_max = n_max;
    p.validate();
    return p;
}

inline Written cmd_bare_spectrum(const RunConfig& rc, const RunOptions& o) {
    auto s = bare_reflection(rc.task.bare_spectrum.frequencies.values(), rc.device.modes);
    if (rc.task.bare_spectrum.noise > 0) add_complex_noise(s.s11, rc.task.bare_spectrum.noise, o.seed);
    const auto csv = o.out_dir / "bare_spectrum.csv", svg = o.out_dir / "bare_spectrum.svg";
    io::write_csv(csv, io::spectrum_table(s));
    std::vector<double> mag;
    for (const auto& v : s.s11) mag.push_back(std::abs(v));
    io::write_svg(svg, io::line_plot_svg({{"|s11|", s.frequencies, mag}}, {"bare reflection", "frequency (Hz)", "|s11|"}));
    return {csv, svg};
}

inline Written cmd_flux_sweep(const RunConfig& rc, const RunOptions& o) {
    auto map = flux_sweep(sweep_currents(rc.task.flux_sweep), rc.task.flux_sweep.frequencies.values(),
                          rc.device.resonant_model(), o.threads);
    if (rc.task.flux_sweep.noise > 0) add_magnitude_noise(map.magnitude, rc.task.flux_sweep.noise, o.seed);
    const auto csv = o.out_dir / "flux_sweep.csv", svg = o.out_dir / "flux_sweep.svg";
    io::write_csv(csv, io::flux_table(map));
    io::write_svg(svg, io::heatmap_svg(map.frequencies, map.currents, map.magnitude,
                                       {"|s11| vs flux bias", "frequency (Hz)", "current (A)"}));
    return {csv, svg};
}

inline Written cmd_participation(const RunConfig& rc, const RunOptions& o) {
    const auto wq = rc.task.participation.omega_q.values();
    const std::size_t n = rc.device.modes.size() + 1;
    std::vector<std::vector<double>> rows(wq.size() * n);
    parallel_for(wq.size(), o.threads, [&](std::size_t i) {
        const EigenSystem es = diagonalize(build_interaction(rc.device.modes, rc.device.coupling, wq[i]));
        const auto rates =
            hybridized_rates(es, rc.device.modes, rc.device.modes.kappa0(), rc.device.transmon.gamma_intrinsic);
        for (std::size_t k = 0; k < n; ++k)
            rows[i * n + k] = {wq[i], static_cast<double>(k), es.eigenvalues[k], es.qubit_participation[k],
                               rates[k].kappa_ex, rates[k].kappa_in};
    });
    io::CsvTable t{{"omega_q", "eigenmode", "eigenvalue", "qubit_participation", "kappa_ex", "kappa_in"}, std::move(rows)};
    const auto csv = o.out_dir / "participation.csv";
    io::write_csv(csv, t);
    return {csv};
}

inline Written cmd_dispersive(const RunConfig& rc, const RunOptions& o) {
    const auto& task = rc.task.dispersive;
    const JCParams base = jc_for_mode(rc.device, task.mode_label, task.levels, task.n_max);
    const auto wq = task.omega_q.values();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::vector<double>> rows(wq.size());
    parallel_for(wq.size(), o.threads, [&](std::size_t i) {
        JCParams p = base;
        p.omega_q = wq[i];
        const double delta = wq[i] - p.omega_cav;
        double c0 = nan, c1 = nan, cs = nan;
        try {
            const DressedLadder l = dressed_energies(p);
            c0 = chi(0, l);
            c1 = chi(1, l);
        } catch (const AmbiguousLabelError&) {
            // labels undefined on resonance; leave a gap
        }
        if (delta != 0.0 && delta != p.alpha) cs = chi_standard(p.g, delta, p.alpha);
        rows[i] = {wq[i], delta, c0, c1, cs};
    });
    const auto csv = o.out_dir / "dispersive.csv";
    io::write_csv(csv, {{"omega_q", "delta", "chi0", "chi1", "chi_standard"}, std::move(rows)});
    return {csv};
}

inline Written cmd_stark(const RunConfig& rc, const RunOptions& o) {
    const auto& task = rc.task.stark;
    const JCParams base = jc_for_mode(rc.device, task.mode_label, task.levels, task.n_max);
    std::vector<int> ns;
    for (int i = 0; i <= task.max_phonons; ++i) ns.push_back(i);
    std::vector<std::vector<double>> rows;
    for (double det : task.detunings) {
        JCParams p = base;
        p.omega_q = p.omega_cav + det;
        const auto shifts = stark_curve(ns, p);
        for (std::size_t k = 0; k < ns.size(); ++k) rows.push_back({det, static_cast<double>(ns[k]), shifts[k]});
    }
    const auto csv = o.out_dir / "stark.csv";
    io::write_csv(csv, {{"detuning", "phonons", "shift"}, std::move(rows)});
    return {csv};
}

inline Written cmd_emission(const RunConfig& rc, const RunOptions& o) {
    const EmissionParams e = rc.device.emission();
    std::vector<std::vector<double>> rows;
    for (double f : rc.task.emission.frequencies.values())
        rows.push_back({f, emission_rate(f, e), qubit_linewidth(f, rc.device.transmon.gamma_intrinsic, e)});
    const auto csv = o.out_dir / "emission.csv";
    io::write_csv(csv, {{"frequency", "gamma_saw", "linewidth"}, std::move(rows)});
    return {csv};
}

inline Written cmd_fit(const RunConfig& rc, const RunOptions& o, const std::filesystem::path& data) {
    const io::CsvTable table = io::read_csv(data);
    std::string kind = rc.task.fit.kind;
    if (kind == "auto") {
        switch (io::detect_kind(table)) {
        case io::CsvKind::spectrum: kind = "bare"; break;
        case io::CsvKind::flux_map: kind = "flux"; break;
        default: throw io::IoError("cannot tell the data kind from header '" + table.header_line() + "'");
        }
    }
    const Device& d = rc.device;
    const FitTask& ft = rc.task.fit;
    json out;
    if (kind == "bare") {
        BareFitOptions opt;
        opt.smoothing_hz = ft.smoothing_hz;
        opt.min_separation_hz = ft.min_separation_hz;
        opt.prominence = ft.prominence;
        opt.fsr_hz = d.fsr_hz();
        opt.first_label = ft.first_label;
        opt.label_offset = d.coupling.label_offset;
        opt.N_c = d.cavity_idt.N_c;
        const BareFit fit = fit_bare_modes(io::spectrum_from_table(table), opt);
        out = io::to_json(fit);
        out["mode_set"] = io::to_json(fit.to_mode_set(d.fsr_hz(), d.cavity.mirror_bandwidth, d.cavity.spacing_tolerance));
    } else {
        FluxFitOptions opt;
        opt.threads = o.threads;
        opt.ib_guess = ft.ib_guess;
        opt.g0_guess = ft.g0_guess;
        opt.ib_scan_halfwidth = ft.ib_scan_halfwidth;
        opt.ib_scan_step = ft.ib_scan_step;
        opt.phi_scan_points = ft.phi_scan_points;
        const FitResult r = fit_flux_map(io::flux_from_table(table), d.modes, d.transmon, d.coupling, opt);
        out = {{"kind", "flux"}, {"result", io::to_json(r)}};
    }
    out["data"] = data.string();
    const auto path = o.out_dir / "fit.json";
    io::write_json(path, out);
    return {path};
}

inline const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"bare-spectrum", "flux-sweep", "participation", "dispersive",
                                                "stark",         "emission",   "fit"};
    return names;
}

} // namespace cqad
