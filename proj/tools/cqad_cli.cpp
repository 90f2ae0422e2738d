// Command-line front end. One subcommand per output family; all of them take
// the same --config / --out / --threads / --seed flags.

#include <iostream>

#include <CLI11.hpp>

#include "cqad/commands.hpp"

namespace {

int fail(const std::string& type, const std::string& message, int code) {
    std::cerr << cqad::json{{"error", {{"type", type}, {"message", message}}}}.dump() << "\n";
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acoustic cavity + transmon simulator and fitter"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_dir, data_path;
    unsigned threads = cqad::default_threads();
    std::optional<std::uint64_t> seed;
    app.add_option("--config", config_path, "JSON run configuration (built-in defaults when omitted)");
    app.add_option("--out", out_dir, "output directory (overrides task.output_dir)");
    app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "noise seed (overrides task.seed)");

    for (const auto& name : cqad::command_names()) {
        auto* sub = app.add_subcommand(name);
        if (name == "fit") sub->add_option("--data", data_path, "CSV produced by bare-spectrum or flux-sweep")->required();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("UsageError", e.what(), 2);
    }

    try {
        const cqad::RunConfig rc =
            config_path.empty() ? cqad::parse_config(cqad::json::object()) : cqad::load_config(config_path);
        cqad::RunOptions opt;
        opt.out_dir = out_dir.empty() ? rc.task.output_dir : out_dir;
        opt.threads = threads;
        opt.seed = seed.value_or(rc.task.seed);

        const std::string cmd = app.get_subcommands().front()->get_name();
        cqad::Written written;
        if (cmd == "bare-spectrum") written = cqad::cmd_bare_spectrum(rc, opt);
        else if (cmd == "flux-sweep") written = cqad::cmd_flux_sweep(rc, opt);
        else if (cmd == "participation") written = cqad::cmd_participation(rc, opt);
        else if (cmd == "dispersive") written = cqad::cmd_dispersive(rc, opt);
        else if (cmd == "stark") written = cqad::cmd_stark(rc, opt);
        else if (cmd == "emission") written = cqad::cmd_emission(rc, opt);
        else written = cqad::cmd_fit(rc, opt, data_path);

        for (const auto& p : written) std::cout << p.string() << "\n";
        return 0;
    } catch (const cqad::ConfigError& e) {
        return fail("ConfigError", e.what(), 2);
    } catch (const cqad::FitError& e) {
        return fail("FitError", e.what(), 1);
    } catch (const cqad::io::IoError& e) {
        return fail("IoError", e.what(), 1);
    } catch (const std::exception& e) {
        return fail("Error", e.what(), 1);
    }
}
