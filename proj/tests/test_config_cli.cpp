#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "mmgeo/config.hpp"
#include "mmgeo/errors.hpp"
#include "mmgeo/runner.hpp"

using namespace mmgeo;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
    static const fs::path dir = [] {
        fs::path p = fs::temp_directory_path() /
                     ("mmgeo_tests_" + std::to_string(::getpid()));
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

fs::path write_file(const std::string& name, const std::string& text) {
    const fs::path p = scratch_dir() / name;
    std::ofstream out(p);
    out << text;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

/// Runs the installed CLI binary (path from MMGEO_BIN) and returns its exit
/// code, or -1 when the binary is unavailable.
int run_cli(const std::string& args) {
    const char* bin = std::getenv("MMGEO_BIN");
    if (!bin) return -1;
    const std::string cmd = std::string(bin) + " " + args + " > " +
                            (scratch_dir() / "cli.out").string() + " 2> " +
                            (scratch_dir() / "cli.err").string();
    const int rc = std::system(cmd.c_str());
    return rc < 0 ? rc : WEXITSTATUS(rc);
}

const std::string kSmallConfig =
    "# scenario\n"
    "d = 50\n"
    "phi_t_deg = 94\n"
    "phi_r_deg = 51\n"
    "theta_b_deg = 30\n"
    "lambda_b = 2e-5\n"
    "e_l = 15\ne_w = 15\ne_l2 = 225\ne_w2 = 225\n"
    "realizations = 200\n"
    "seed = 3\n";

}  // namespace

TEST_CASE("parse_config_text: defaults, comments, units") {
    const RunConfig c = parse_config_text(kSmallConfig);
    CHECK(c.scenario.d == 50.0);
    CHECK(rad2deg(c.scenario.phi_t) == doctest::Approx(94.0));
    CHECK(rad2deg(c.scenario.theta_bt) == doctest::Approx(30.0));
    CHECK(rad2deg(c.scenario.theta_br) == doctest::Approx(30.0));
    CHECK(c.scenario.lambda_b == 2e-5);
    CHECK(c.scene.realizations == 200);
    CHECK(c.scene.master_seed == 3);
    // untouched keys keep their defaults
    CHECK(c.scenario.w_h == 0.30);
    CHECK(c.scene.half_extent == 400.0);
}

TEST_CASE("parse_config_text: errors carry key and line") {
    try {
        parse_config_text("d = 50\nnot_a_key = 1\n");
        FAIL("expected config_error");
    } catch (const config_error& e) {
        CHECK(e.key == "not_a_key");
        CHECK(e.line == 2);
    }
    try {
        parse_config_text("d = fifty\n");
        FAIL("expected config_error");
    } catch (const config_error& e) {
        CHECK(e.key == "d");
        CHECK(e.line == 1);
    }
    CHECK_THROWS_AS(parse_config_text("p_self = 1.5\n"), config_error);
    // cross-field: thinning factor must stay positive
    CHECK_THROWS_AS(
        parse_config_text("lambda_b = 1e-3\ne_l = 40\ne_w = 40\n"
                          "e_l2 = 1600\ne_w2 = 1600\n"),
        config_error);
}

TEST_CASE("serialize_config: exact round trip") {
    RunConfig c;
    c.scenario.d = 123.456;
    c.scenario.phi_t = deg2rad(94.0);
    c.scenario.gamma_rm = std::pow(10.0, -0.318);
    c.scenario.orientation = OrientationModel::UniformOverPi;
    c.scenario.second_order = false;
    c.scene.realizations = 777;
    c.scene.length_dist = DimDist::Uniform;
    c.scenario.moments = {15.0, 15.0, 300.0, 225.0};
    const std::string text = serialize_config(c);
    const RunConfig back = parse_config_text(text);
    CHECK(serialize_config(back) == text);
    CHECK(back.scenario.phi_t == c.scenario.phi_t);
    CHECK(back.scenario.gamma_rm == c.scenario.gamma_rm);
    CHECK(back.scene.length_dist == DimDist::Uniform);
}

TEST_CASE("apply_sweep_value: known and unknown keys") {
    RunConfig c;
    CHECK(apply_sweep_value(c, "d", 99.0));
    CHECK(c.scenario.d == 99.0);
    CHECK(apply_sweep_value(c, "phi_r_deg", 40.0));
    CHECK(rad2deg(c.scenario.phi_r) == doctest::Approx(40.0));
    CHECK(apply_sweep_value(c, "theta_b_deg", 20.0));
    CHECK(rad2deg(c.scenario.theta_bt) == doctest::Approx(20.0));
    CHECK_FALSE(apply_sweep_value(c, "realizations", 10.0));
    CHECK_FALSE(apply_sweep_value(c, "no_such_key", 1.0));
}

TEST_CASE("load_config: missing file raises io_error") {
    CHECK_THROWS_AS(load_config((scratch_dir() / "absent.cfg").string()),
                    io_error);
}

TEST_CASE("runner: analyze sweep writes schema, header and rows") {
    const fs::path cfg = write_file("an.cfg", kSmallConfig);
    const fs::path out = scratch_dir() / "an.csv";
    RunSpec spec;
    spec.mode = RunMode::Analyze;
    spec.config_path = cfg.string();
    spec.out_path = out.string();
    spec.sweep = SweepSpec{"d", 25.0, 150.0, 6};
    std::ostringstream log;
    CHECK(run(spec, log) == 0);
    const auto rows = lines_of(slurp(out));
    REQUIRE(rows.size() == 8);  // schema + header + 6 sweep points
    CHECK(rows[0] == "# schema=1");
    CHECK(rows[1] ==
          "sweep_value,n_r_exact,n_r_closed,pl_db_exact,pl_db_closed,"
          "tau_mean_ns,tau_rms_ns,bc_mhz");
    CHECK(rows[2].substr(0, 3) == "25,");
    CHECK(rows[7].substr(0, 4) == "150,");
}

TEST_CASE("runner: degenerate pointing emits inf tokens") {
    // default pointing angles leave no coupling window: the path loss column
    // must carry the textual inf marker rather than a number
    const fs::path cfg = write_file("inf.cfg", "d = 50\n");
    const fs::path out = scratch_dir() / "inf.csv";
    RunSpec spec;
    spec.mode = RunMode::Analyze;
    spec.config_path = cfg.string();
    spec.out_path = out.string();
    std::ostringstream log;
    CHECK(run(spec, log) == 0);
    const auto rows = lines_of(slurp(out));
    REQUIRE(rows.size() == 3);
    CHECK(rows[2].find(",inf,") != std::string::npos);
}

TEST_CASE("runner: unknown sweep key is a configuration error") {
    const fs::path cfg = write_file("bad.cfg", kSmallConfig);
    RunSpec spec;
    spec.mode = RunMode::Analyze;
    spec.config_path = cfg.string();
    spec.out_path = (scratch_dir() / "bad.csv").string();
    spec.sweep = SweepSpec{"bogus", 0.0, 1.0, 2};
    std::ostringstream log;
    CHECK(run(spec, log) == 2);
}

TEST_CASE("runner: missing config file maps to the io exit code") {
    RunSpec spec;
    spec.mode = RunMode::Analyze;
    spec.config_path = (scratch_dir() / "nope.cfg").string();
    spec.out_path = (scratch_dir() / "nope.csv").string();
    std::ostringstream log;
    CHECK(run(spec, log) == 4);
}

TEST_CASE("cli: subcommands, sweeps and exit codes") {
    if (!std::getenv("MMGEO_BIN")) {
        WARN_MESSAGE(false, "MMGEO_BIN not set; CLI subprocess checks skipped");
        return;
    }
    const fs::path cfg = write_file("cli.cfg", kSmallConfig);
    const fs::path an = scratch_dir() / "cli_an.csv";
    const fs::path sim = scratch_dir() / "cli_sim.csv";
    const fs::path cmp = scratch_dir() / "cli_cmp.csv";

    CHECK(run_cli("analyze --config " + cfg.string() + " --sweep d:25:100:4" +
                  " --out " + an.string()) == 0);
    const auto an_rows = lines_of(slurp(an));
    REQUIRE(an_rows.size() == 6);
    CHECK(an_rows[0] == "# schema=1");

    CHECK(run_cli("simulate --config " + cfg.string() +
                  " --realizations 150 --seed 9 --out " + sim.string()) == 0);
    const auto sim_rows = lines_of(slurp(sim));
    REQUIRE(sim_rows.size() == 3);
    CHECK(sim_rows[1] ==
          "sweep_value,n_r_mc,n_r_se,pl_db_mc,pl_db_se,tau_rms_ns_mc");

    CHECK(run_cli("compare --config " + cfg.string() +
                  " --realizations 150 --seed 9 --out " + cmp.string()) == 0);
    const auto cmp_rows = lines_of(slurp(cmp));
    REQUIRE(cmp_rows.size() == 3);
    CHECK(cmp_rows[1] ==
          "sweep_value,n_r_exact,n_r_mc,n_r_se,n_r_rel_err,n_r_flagged,"
          "pl_db_exact,pl_db_mc,pl_db_se,pl_rel_err,pl_flagged");

    // repeated seeded runs are byte-identical
    const fs::path sim2 = scratch_dir() / "cli_sim2.csv";
    CHECK(run_cli("simulate --config " + cfg.string() +
                  " --realizations 150 --seed 9 --out " + sim2.string()) == 0);
    CHECK(slurp(sim) == slurp(sim2));

    // error paths: bad sweep spec, bad config, missing file
    CHECK(run_cli("analyze --config " + cfg.string() +
                  " --sweep nonsense --out " + an.string()) == 2);
    CHECK(run_cli("analyze --config " + cfg.string() +
                  " --sweep bogus:1:2:3 --out " + an.string()) == 2);
    const fs::path broken = write_file("broken.cfg", "p_self = 2\n");
    CHECK(run_cli("analyze --config " + broken.string() + " --out " +
                  an.string()) == 2);
    CHECK(run_cli("analyze --config " + (scratch_dir() / "ghost.cfg").string() +
                  " --out " + an.string()) == 4);
    // no subcommand is a usage error
    CHECK(run_cli("--config " + cfg.string()) != 0);
}
