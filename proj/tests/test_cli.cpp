#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sys/wait.h>
#include <unistd.h>

#include "cqad/config.hpp"
#include "cqad/io/csv.hpp"
#include "cqad/io/json.hpp"

using namespace cqad;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code = -1;
    std::string out, err;
};

fs::path workdir() {
    const fs::path d = fs::temp_directory_path() / ("cqad_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
}

Outcome run(const std::string& args) {
    const fs::path d = workdir();
    const std::string cmd = std::string("\"") + CQAD_CLI_PATH + "\" " + args + " > \"" + (d / "stdout").string() +
                            "\" 2> \"" + (d / "stderr").string() + "\"";
    Outcome r;
    const int status = std::system(cmd.c_str());
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = io::read_file(d / "stdout");
    r.err = io::read_file(d / "stderr");
    return r;
}

fs::path write_config(const std::string& name, const json& j) {
    const fs::path p = workdir() / name;
    std::ofstream(p) << j.dump(2);
    return p;
}

// Small grids so every command finishes in seconds.
json small_config() {
    return json::parse(R"({
      "task": {
        "bare_spectrum": {"frequencies": {"start": 4.222e9, "stop": 4.284e9, "points": 6201}, "noise": 0.01},
        "flux_sweep": {"frequencies": {"start": 4.222e9, "stop": 4.284e9, "points": 300},
                       "currents": [{"start": -2.6871e-4, "stop": -2.5624e-4, "points": 12},
                                    {"start": 2.5624e-4, "stop": 2.6871e-4, "points": 12}],
                       "noise": 0.01},
        "participation": {"omega_q": {"start": 4.22e9, "stop": 4.29e9, "points": 41}},
        "dispersive": {"omega_q": {"start": 3.8e9, "stop": 4.9e9, "points": 111}},
        "emission": {"frequencies": {"start": 3.8e9, "stop": 4.7e9, "points": 91}}
      }
    })");
}

} // namespace

TEST(Cli, EveryCommandWritesReparseableOutput) {
    const fs::path cfg = write_config("small.json", small_config()), out = workdir() / "all";
    const std::map<std::string, std::vector<std::string>> expected{
        {"bare-spectrum", {"bare_spectrum.csv", "bare_spectrum.svg"}},
        {"flux-sweep", {"flux_sweep.csv", "flux_sweep.svg"}},
        {"participation", {"participation.csv"}},
        {"dispersive", {"dispersive.csv"}},
        {"stark", {"stark.csv"}},
        {"emission", {"emission.csv"}}};
    for (const auto& [cmd, files] : expected) {
        const Outcome r = run(cmd + " --config " + cfg.string() + " --out " + out.string() + " --threads 2");
        ASSERT_EQ(r.code, 0) << cmd << ": " << r.err;
        for (const auto& f : files) {
            ASSERT_TRUE(fs::exists(out / f)) << f;
            EXPECT_NE(r.out.find(f), std::string::npos);
            if (f.ends_with(".csv")) {
                const io::CsvTable t = io::read_csv(out / f);
                EXPECT_FALSE(t.rows.empty()) << f;
            }
        }
    }
    EXPECT_EQ(io::read_spectrum(out / "bare_spectrum.csv").s11.size(), 6201u);
    const auto map = io::read_flux_map(out / "flux_sweep.csv");
    EXPECT_EQ(map.currents.size(), 24u);
    EXPECT_EQ(map.frequencies.size(), 300u);
    EXPECT_EQ(io::read_csv(out / "participation.csv").rows.size(), 41u * 18u);
    EXPECT_EQ(io::read_csv(out / "stark.csv").rows.size(), 3u * 16u);
}

TEST(Cli, SameConfigAndSeedGiveIdenticalBytes) {
    const fs::path cfg = write_config("det.json", small_config()), d = workdir();
    for (const char* cmd : {"bare-spectrum", "flux-sweep"}) {
        ASSERT_EQ(run(std::string(cmd) + " --config " + cfg.string() + " --out " + (d / "a").string() + " --seed 4 --threads 1").code, 0);
        ASSERT_EQ(run(std::string(cmd) + " --config " + cfg.string() + " --out " + (d / "b").string() + " --seed 4 --threads 3").code, 0);
        ASSERT_EQ(run(std::string(cmd) + " --config " + cfg.string() + " --out " + (d / "c").string() + " --seed 5").code, 0);
    }
    for (const char* f : {"bare_spectrum.csv", "flux_sweep.csv", "bare_spectrum.svg", "flux_sweep.svg"}) {
        EXPECT_EQ(io::read_file(d / "a" / f), io::read_file(d / "b" / f)) << f;
        if (std::string(f).ends_with(".csv")) EXPECT_NE(io::read_file(d / "a" / f), io::read_file(d / "c" / f)) << f;
    }
}

TEST(Cli, EmptyModeListExitsWithConfigError) {
    const fs::path cfg = write_config("empty.json", json::parse(R"({"device": {"modes": []}})"));
    const Outcome r = run("bare-spectrum --config " + cfg.string() + " --out " + (workdir() / "x").string());
    EXPECT_EQ(r.code, 2);
    const json err = json::parse(r.err);
    EXPECT_EQ(err["error"]["type"], "ConfigError");
    EXPECT_FALSE(fs::exists(workdir() / "x" / "bare_spectrum.csv"));
}

TEST(Cli, UnknownKeyAndBadUsage) {
    const fs::path cfg = write_config("unknown.json", json::parse(R"({"task": {"stark": {"phonons": 3}}})"));
    Outcome r = run("stark --config " + cfg.string());
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(json::parse(r.err)["error"]["type"], "ConfigError");
    r = run("no-such-command");
    EXPECT_EQ(r.code, 2);
    r = run("fit");   // --data missing
    EXPECT_EQ(r.code, 2);
}

TEST(Cli, FitOnUnrecognisedDataIsRuntimeError) {
    const fs::path data = workdir() / "junk.csv";
    std::ofstream(data) << "x,y\n1,2\n";
    const Outcome r = run("fit --data " + data.string() + " --out " + (workdir() / "j").string());
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(json::parse(r.err)["error"]["type"], "IoError");
}

TEST(Cli, FitRecoversBareSpectrumParameters) {
    const fs::path cfg = write_config("bare.json", small_config()), out = workdir() / "bare";
    ASSERT_EQ(run("bare-spectrum --config " + cfg.string() + " --out " + out.string() + " --seed 1").code, 0);
    const Outcome r = run("fit --config " + cfg.string() + " --data " + (out / "bare_spectrum.csv").string() + " --out " +
                      out.string());
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = io::read_json(out / "fit.json");
    EXPECT_EQ(j["kind"], "bare");
    const FitResult f = io::fit_result_from_json(j["result"]);
    EXPECT_NEAR(f.value("kappa0") / 178.2e3, 1.0, 0.05);
    EXPECT_NEAR(f.value("phi_c"), kPi / 4 - 0.09, 0.02);
    EXPECT_EQ(io::mode_set_from_json(j["mode_set"]).size(), 17u);
}

TEST(Cli, FitOnFluxSweepOutputRoundTrips) {
    json c = small_config();
    c["device"]["transmon"]["Ib"] = 1.3e-6;
    c["task"]["flux_sweep"]["frequencies"]["points"] = 600;
    c["task"]["flux_sweep"]["currents"] = json::parse(R"([{"start": -2.6740e-4, "stop": -2.5493e-4, "points": 30},
                                                           {"start": 2.5753e-4, "stop": 2.7000e-4, "points": 30}])");
    const fs::path cfg = write_config("flux.json", c), out = workdir() / "flux";
    ASSERT_EQ(run("flux-sweep --config " + cfg.string() + " --out " + out.string() + " --seed 3").code, 0);
    const Outcome r = run("fit --config " + cfg.string() + " --data " + (out / "flux_sweep.csv").string() + " --out " +
                      out.string());
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = io::read_json(out / "fit.json");
    EXPECT_EQ(j["kind"], "flux");
    const FitResult f = io::fit_result_from_json(j["result"]);
    EXPECT_TRUE(f.converged);
    EXPECT_NEAR(f.value("g0") / 6.5e6, 1.0, 0.01);
    EXPECT_NEAR(f.value("phi_q"), -0.1, 0.01);
    EXPECT_NEAR(f.value("Ib"), 1.3e-6, 0.1e-6);
}
