#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "cli_app.hpp"
#include "fopid/io.hpp"

using namespace fopid;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("fopid_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

// Fast toy run config shared by the CLI end-to-end cases.
const char* kToyConfig =
    "sample_time = 0.01\n"
    "horizon_seconds = 2\n"
    "pso.population = 10\n"
    "pso.max_evaluations = 200\n"
    "pso.seed = 5\n";

}  // namespace

TEST_CASE("data CSV round-trips bit exactly") {
    TempDir tmp;
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> u(64), y(64);
    for (double& v : u) v = dist(rng) * std::pow(10.0, static_cast<int>(rng() % 17) - 8);
    for (double& v : y) v = dist(rng) * std::pow(10.0, static_cast<int>(rng() % 17) - 8);
    u[0] = 1.0 / 3.0;
    const DataRecord data = make_data_record(make_sequence(u, 0.01), make_sequence(y, 0.01), "rt");

    const fs::path p = tmp.path / "data.csv";
    io::write_data_csv(p, data);
    const DataRecord back = io::read_data_csv(p);
    REQUIRE(back.u.size() == data.u.size());
    CHECK(back.u.sample_time == data.u.sample_time);
    for (std::size_t k = 0; k < 64; ++k) {
        CHECK(back.u[k] == data.u[k]);
        CHECK(back.y[k] == data.y[k]);
    }
}

TEST_CASE("data CSV validation") {
    TempDir tmp;
    const fs::path p = tmp.path / "bad.csv";
    write_file(p, "k,t,u,y\n0,0,1,0\n");
    CHECK_THROWS_AS(io::read_data_csv(p), ConfigError);  // missing sample_time

    write_file(p, "# sample_time=0.01\nk,t,u,y\n0,0,0,0\n1,0.01,1,0\n");
    CHECK_THROWS_AS(io::read_data_csv(p), DataInvalidError);  // u[0] == 0
}

TEST_CASE("config parsing: defaults, overrides, unknown keys") {
    const TuningConfig defaults = io::parse_config_text("");
    CHECK(defaults.sample_time == 0.01);
    CHECK(defaults.horizon_seconds == 25.0);
    CHECK(defaults.setpoint == 1.0);
    CHECK(defaults.pso.population == 150);
    CHECK(defaults.pso.max_evaluations == 45000);
    CHECK(defaults.oustaloup.order == 5);
    CHECK(defaults.oustaloup.omega_low == 1e-6);
    CHECK(defaults.oustaloup.omega_high == 1e3);
    CHECK(defaults.bounds.lower == std::vector<double>{0.0, 0.0, 0.0, 0.0, 0.0});
    CHECK(defaults.bounds.upper == std::vector<double>{10.0, 10.0, 10.0, 2.0, 2.0});
    CHECK(!defaults.fixed_lambda.has_value());

    const TuningConfig cfg = io::parse_config_text(
        "sample_time = 0.02\n"
        "horizon_seconds = 10 # comment\n"
        "weight.kind = saturated\n"
        "weight.alpha = 12.5\n"
        "bounds.kfp = 0.5,4\n"
        "fixed.lambda = 1\n"
        "pso.seed = 42\n"
        "prefilter.window = 5\n");
    CHECK(cfg.sample_time == 0.02);
    CHECK(cfg.weight.kind == WeightKind::Saturated);
    CHECK(cfg.weight.alpha == 12.5);
    CHECK(cfg.weight.sample_time == 0.02);
    CHECK(cfg.fixed_lambda == 1.0);
    CHECK(cfg.bounds.dimension() == 4);  // lambda removed from the search box
    CHECK(cfg.bounds.lower[0] == 0.5);
    CHECK(cfg.bounds.upper[0] == 4.0);
    CHECK(cfg.pso.seed == 42);
    CHECK(cfg.prefilter_window == 5);

    CHECK_THROWS_AS(io::parse_config_text("sample_tme = 0.01\n"), ConfigError);
    CHECK_THROWS_AS(io::parse_config_text("weight.kind = quadratic\n"), ConfigError);
    CHECK_THROWS_AS(io::parse_config_text("bounds.kfp = 1\n"), ConfigError);
    CHECK_THROWS_AS(io::parse_config_text("bounds.kfp = 4,1\n"), ConfigError);
    CHECK_THROWS_AS(io::parse_config_text("bounds.lambda = 0,3\n"), ConfigError);
    CHECK_THROWS_AS(io::parse_config_text("bounds.kfi = -1,2\n"), ConfigError);
    CHECK_THROWS_AS(io::parse_config_text("fixed.lambda = 2.5\n"), ConfigError);
    CHECK_THROWS_AS(io::parse_config_text("pso.seed = -3\n"), ConfigError);
    CHECK_THROWS_AS(io::parse_config_text("prefilter.window = 4\n"), ConfigError);
    CHECK_THROWS_AS(io::parse_config_text("sample_time = 0.01\nsample_time = 0.02\n"), ConfigError);
}

TEST_CASE("outcome json round-trip") {
    TempDir tmp;
    TuningOutcome out;
    out.strategy = "data-driven itae";
    out.phi_star = FoPidParams{1.25, 0.5, 2.0, 1.0, 0.75};
    out.objective_value = 123.456;
    out.evaluations = 321;
    const TuningConfig cfg = default_tuning_config();
    const fs::path p = tmp.path / "outcome.json";
    io::write_outcome_json(p, out, cfg);
    const TuningOutcome back = io::read_outcome_json(p);
    CHECK(back.strategy == out.strategy);
    CHECK(back.phi_star.k_fp == out.phi_star.k_fp);
    CHECK(back.phi_star.mu == out.phi_star.mu);
    CHECK(back.objective_value == out.objective_value);
    CHECK(back.evaluations == 321);
}

TEST_CASE("plant file parsing") {
    TempDir tmp;
    const fs::path p = tmp.path / "plant.txt";
    write_file(p, "num = 9\nden = 1, 2.2, 10.2, 9\nlabel = bench\n");
    const PlantModel plant = io::read_plant_file(p, 0.01);
    CHECK(plant.label() == "bench");
    CHECK(std::abs(evaluate(plant.discretize(0.01), 1.0)) == doctest::Approx(1.0).epsilon(1e-9));

    write_file(p, "num = 1\n");
    CHECK_THROWS_AS(io::read_plant_file(p, 0.01), ConfigError);
    write_file(p, "num = 1\nden = 1,1\nwhat = 2\n");
    CHECK_THROWS_AS(io::read_plant_file(p, 0.01), ConfigError);
}

TEST_CASE("cli: simulate-data then tune completes and improves on the incumbent") {
    TempDir tmp;
    const fs::path cfg_path = tmp.path / "run.cfg";
    write_file(cfg_path, kToyConfig);
    const fs::path data_path = tmp.path / "data.csv";

    CHECK(cli::run({"simulate-data", "--plant", "full", "--config", cfg_path.string(), "--out",
                    data_path.string()}) == 0);
    REQUIRE(fs::exists(data_path));

    const fs::path out_dir = tmp.path / "fr";
    CHECK(cli::run({"tune", "--data", data_path.string(), "--config", cfg_path.string(),
                    "--criterion", "itae", "--out", out_dir.string()}) == 0);
    REQUIRE(fs::exists(out_dir / "outcome.json"));
    REQUIRE(fs::exists(out_dir / "trace.csv"));
    REQUIRE(fs::exists(out_dir / "step_response.csv"));

    // J(phi*) <= J(phi0): the incumbent was part of the swarm.
    const TuningOutcome outcome = io::read_outcome_json(out_dir / "outcome.json");
    const TuningConfig cfg = io::read_config_file(cfg_path);
    const DataRecord data = io::read_data_csv(data_path);
    const std::size_t n = data.u.size() - 1;
    const DiscreteController c0 = fopid_discrete(cfg.incumbent, cfg.oustaloup, cfg.sample_time, n);
    WeightScheme w = cfg.weight;
    const double j0 = itae_data_driven(data, c0.impulse, cfg.setpoint, w, cfg.singularity_eps);
    CHECK(outcome.objective_value <= j0);
}

TEST_CASE("cli: tune is deterministic for a fixed seed") {
    TempDir tmp;
    const fs::path cfg_path = tmp.path / "run.cfg";
    write_file(cfg_path, kToyConfig);
    const fs::path data_path = tmp.path / "data.csv";
    REQUIRE(cli::run({"simulate-data", "--plant", "full", "--config", cfg_path.string(), "--out",
                      data_path.string()}) == 0);

    auto run_once = [&](const std::string& dir) {
        REQUIRE(cli::run({"tune", "--data", data_path.string(), "--config", cfg_path.string(),
                          "--out", (tmp.path / dir).string()}) == 0);
        std::ifstream in(tmp.path / dir / "outcome.json");
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    CHECK(run_once("a") == run_once("b"));
}

TEST_CASE("cli: tune rejects data whose first input sample is zero with exit 2") {
    TempDir tmp;
    const fs::path data_path = tmp.path / "bad.csv";
    write_file(data_path, "# sample_time=0.01\nk,t,u,y\n0,0,0,0\n1,0.01,1,0.1\n");
    const fs::path out_dir = tmp.path / "out";
    CHECK(cli::run({"tune", "--data", data_path.string(), "--out", out_dir.string()}) == 2);
}

TEST_CASE("cli: simulate-data with a zero-gain controller exits 2") {
    TempDir tmp;
    const fs::path cfg_path = tmp.path / "run.cfg";
    write_file(cfg_path, std::string(kToyConfig) + "setpoint = 0\n");
    // zero setpoint means zero excitation: u == 0 everywhere
    CHECK(cli::run({"simulate-data", "--plant", "full", "--config", cfg_path.string(), "--out",
                    (tmp.path / "d.csv").string()}) == 2);
}

TEST_CASE("cli: evaluate prints metrics and exits 0") {
    TempDir tmp;
    const fs::path cfg_path = tmp.path / "run.cfg";
    write_file(cfg_path, kToyConfig);
    CHECK(cli::run({"evaluate", "--plant", "full", "--phi", "1,0,1,0,1", "--config",
                    cfg_path.string()}) == 0);
    CHECK(cli::run({"evaluate", "--plant", "nonsense", "--phi", "1,0,1,0,1"}) == 1);
}

TEST_CASE("cli: tune-sim and compare produce the comparison artifacts") {
    TempDir tmp;
    const fs::path cfg_path = tmp.path / "run.cfg";
    write_file(cfg_path, kToyConfig);
    const fs::path data_path = tmp.path / "data.csv";
    REQUIRE(cli::run({"simulate-data", "--plant", "full", "--config", cfg_path.string(), "--out",
                      data_path.string()}) == 0);
    REQUIRE(cli::run({"tune", "--data", data_path.string(), "--config", cfg_path.string(), "--out",
                      (tmp.path / "fr").string()}) == 0);
    REQUIRE(cli::run({"tune-sim", "--plant", "reduced", "--config", cfg_path.string(), "--out",
                      (tmp.path / "mb").string()}) == 0);

    CHECK(cli::run({"compare", "--outcomes", (tmp.path / "fr").string(), (tmp.path / "mb").string(),
                    "--plant", "full", "--config", cfg_path.string(), "--out",
                    (tmp.path / "cmp").string()}) == 0);
    CHECK(fs::exists(tmp.path / "cmp" / "comparison.csv"));
    CHECK(fs::exists(tmp.path / "cmp" / "comparison.txt"));
    CHECK(fs::exists(tmp.path / "cmp" / "step_responses.csv"));
}

TEST_CASE("cli: freq-response writes the sweep") {
    TempDir tmp;
    const fs::path out = tmp.path / "freq.csv";
    CHECK(cli::run({"freq-response", "--gamma", "0.5", "--out", out.string()}) == 0);
    std::ifstream in(out);
    std::string header;
    std::getline(in, header);
    CHECK(header == "omega_rad_s,magnitude_db,phase_deg");
    // midband row should carry ~45 degree phase
    std::string line;
    bool found_mid = false;
    while (std::getline(in, line)) {
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        const double w = std::stod(line.substr(0, c1));
        const double ph = std::stod(line.substr(c2 + 1));
        if (w > 1e-2 && w < 1e-1) {
            found_mid = true;
            CHECK(ph == doctest::Approx(45.0).epsilon(0.12));
        }
    }
    CHECK(found_mid);
}
