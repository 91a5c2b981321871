#include "cli_app.hpp"

#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>

#include <CLI11.hpp>

#include "fopid/io.hpp"
#include "fopid/pipeline.hpp"

namespace fopid::cli {

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInvalidData = 2;
constexpr int kExitOptimizerFailure = 3;

TuningConfig load_config(const std::string& path) {
    if (path.empty()) return default_tuning_config();
    return io::read_config_file(path);
}

PlantModel load_plant(const std::string& spec, double sample_time) {
    if (spec == "full") return full_plant_preset();
    if (spec == "reduced") return reduced_plant_preset();
    if (fs::exists(spec)) return io::read_plant_file(spec, sample_time);
    throw ConfigError("plant must be 'full', 'reduced', or a readable plant file; got '" + spec + "'");
}

FoPidParams parse_phi(const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
    if (v.size() != 5) throw ConfigError("--phi needs 'kfp,kfi,kfd,lambda,mu'");
    return FoPidParams{v[0], v[1], v[2], v[3], v[4]};
}

DataRecord load_data(const std::string& path, const TuningConfig& cfg) {
    DataRecord data = io::read_data_csv(path);
    if (cfg.prefilter_window) {
        Sequence y = prefilter_moving_average(data.y, *cfg.prefilter_window);
        data = make_data_record(data.u, std::move(y), data.meta + " (prefiltered)");
    }
    return data;
}

void write_tuning_artifacts(const fs::path& dir, const TuningOutcome& outcome, const TuningConfig& cfg) {
    fs::create_directories(dir);
    io::write_outcome_json(dir / "outcome.json", outcome, cfg);
    io::write_trace_csv(dir / "trace.csv", outcome.trace, cfg.fixed_lambda);
    io::write_sequence_csv(dir / "step_response.csv",
                           step_response_from_t(outcome.t_est, cfg.setpoint), "y");
}

int cmd_simulate_data(const std::string& plant_spec, const std::string& config_path,
                      const std::string& out_path) {
    const TuningConfig cfg = load_config(config_path);
    const PlantModel plant = load_plant(plant_spec, cfg.sample_time);
    const DataRecord data = collect_closed_loop_data(plant, cfg.incumbent, cfg);
    io::write_data_csv(out_path, data);
    std::cout << "wrote " << data.u.size() << " samples to " << out_path << "\n";
    return kExitOk;
}

int cmd_tune(const std::string& data_path, const std::string& config_path,
             const std::string& criterion, const std::string& out_dir) {
    TuningConfig cfg = load_config(config_path);
    if (criterion == "itae") {
        cfg.criterion = Criterion::Itae;
    } else if (criterion == "iae") {
        cfg.criterion = Criterion::Iae;
    } else {
        throw ConfigError("--criterion must be 'itae' or 'iae'");
    }
    const DataRecord data = load_data(data_path, cfg);
    const TuningOutcome outcome = tune_fr(data, cfg);
    write_tuning_artifacts(out_dir, outcome, cfg);
    std::cout << outcome.strategy << ": J = " << io::format_double(outcome.objective_value)
              << " after " << outcome.evaluations << " evaluations\n"
              << "phi* = (" << outcome.phi_star.k_fp << ", " << outcome.phi_star.k_fi << ", "
              << outcome.phi_star.k_fd << ", " << outcome.phi_star.lambda << ", "
              << outcome.phi_star.mu << ")\n"
              << "report written to " << out_dir << "\n";
    return kExitOk;
}

int cmd_tune_sim(const std::string& plant_spec, const std::string& config_path,
                 const std::string& out_dir) {
    const TuningConfig cfg = load_config(config_path);
    const PlantModel plant = load_plant(plant_spec, cfg.sample_time);
    const TuningOutcome outcome = tune_sim(plant, cfg);
    write_tuning_artifacts(out_dir, outcome, cfg);
    std::cout << outcome.strategy << ": J = " << io::format_double(outcome.objective_value)
              << " after " << outcome.evaluations << " evaluations\n"
              << "report written to " << out_dir << "\n";
    return kExitOk;
}

int cmd_evaluate(const std::string& plant_spec, const std::string& phi_str,
                 const std::string& config_path) {
    const TuningConfig cfg = load_config(config_path);
    const PlantModel plant = load_plant(plant_spec, cfg.sample_time);
    const FoPidParams phi = parse_phi(phi_str);
    const Metrics m = evaluate_controller(plant, phi, cfg);
    std::cout << "plant=" << plant.label() << " phi=(" << phi.k_fp << ", " << phi.k_fi << ", "
              << phi.k_fd << ", " << phi.lambda << ", " << phi.mu << ")\n"
              << render_metrics(m) << "\n";
    return kExitOk;
}

int cmd_compare(const std::vector<std::string>& outcome_dirs, const std::string& plant_spec,
                const std::string& config_path, const std::string& out_dir) {
    const TuningConfig cfg = load_config(config_path);
    const PlantModel plant = load_plant(plant_spec, cfg.sample_time);
    std::vector<TuningOutcome> outcomes;
    for (const std::string& dir : outcome_dirs) {
        fs::path p(dir);
        if (fs::is_directory(p)) p /= "outcome.json";
        outcomes.push_back(io::read_outcome_json(p));
    }
    const CompareReport report = compare_report(outcomes, plant, cfg);
    fs::create_directories(out_dir);
    io::write_compare_csv(fs::path(out_dir) / "comparison.csv", report);
    if (!report.step_responses.empty()) {
        io::write_multi_sequence_csv(fs::path(out_dir) / "step_responses.csv", report.step_responses);
    }
    const std::string table = render_table(report);
    std::ofstream(fs::path(out_dir) / "comparison.txt") << table;
    std::cout << table << "report written to " << out_dir << "\n";
    return kExitOk;
}

int cmd_freq_response(double gamma, const std::string& config_path, const std::string& out_path) {
    const TuningConfig cfg = load_config(config_path);
    const ContinuousTf g = oustaloup_ct(gamma, cfg.oustaloup);
    const int points = 601;
    const double lw = std::log10(cfg.oustaloup.omega_low);
    const double hw = std::log10(cfg.oustaloup.omega_high);
    std::ofstream out(out_path);
    if (!out) throw ConfigError("cannot open " + out_path + " for writing");
    out << "omega_rad_s,magnitude_db,phase_deg\n";
    for (int i = 0; i < points; ++i) {
        const double w = std::pow(10.0, lw + (hw - lw) * i / (points - 1));
        const std::complex<double> h = evaluate(g, std::complex<double>(0.0, w));
        out << io::format_double(w) << "," << io::format_double(20.0 * std::log10(std::abs(h)))
            << "," << io::format_double(std::arg(h) * 180.0 / std::numbers::pi) << "\n";
    }
    std::cout << "wrote " << points << " points to " << out_path << "\n";
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"Data-driven FO-PID controller tuning from one recorded input/output pair"};
    app.require_subcommand(1);

    std::string plant_spec, config_path, out_path, data_path, phi_str;
    std::string criterion = "itae";
    std::vector<std::string> outcome_dirs;
    double gamma = 0.5;

    auto* sim = app.add_subcommand("simulate-data", "record closed-loop step data from a plant preset");
    sim->add_option("--plant", plant_spec, "full | reduced | <plant file>")->required();
    sim->add_option("--config", config_path, "run config file");
    sim->add_option("--out", out_path, "output data CSV")->required();

    auto* tune = app.add_subcommand("tune", "tune from recorded data (no plant model)");
    tune->add_option("--data", data_path, "data CSV")->required();
    tune->add_option("--config", config_path, "run config file");
    tune->add_option("--criterion", criterion, "itae | iae")->check(CLI::IsMember({"itae", "iae"}));
    tune->add_option("--out", out_path, "report directory")->required();

    auto* tune_sim_cmd = app.add_subcommand("tune-sim", "tune against a plant model by simulation");
    tune_sim_cmd->add_option("--plant", plant_spec, "full | reduced | <plant file>")->required();
    tune_sim_cmd->add_option("--config", config_path, "run config file");
    tune_sim_cmd->add_option("--out", out_path, "report directory")->required();

    auto* eval = app.add_subcommand("evaluate", "step-response metrics of a controller on a plant");
    eval->add_option("--plant", plant_spec, "full | reduced | <plant file>")->required();
    eval->add_option("--phi", phi_str, "kfp,kfi,kfd,lambda,mu")->required();
    eval->add_option("--config", config_path, "run config file");

    auto* cmp = app.add_subcommand("compare", "compare tuning outcomes on one evaluation plant");
    cmp->add_option("--outcomes", outcome_dirs, "outcome directories or json files")->required();
    cmp->add_option("--plant", plant_spec, "full | reduced | <plant file>")->required();
    cmp->add_option("--config", config_path, "run config file");
    cmp->add_option("--out", out_path, "report directory")->required();

    auto* freq = app.add_subcommand("freq-response", "frequency sweep of the s^gamma approximation");
    freq->add_option("--gamma", gamma, "fractional exponent, |gamma| < 1")->required();
    freq->add_option("--config", config_path, "run config file");
    freq->add_option("--out", out_path, "output CSV")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (sim->parsed()) return cmd_simulate_data(plant_spec, config_path, out_path);
        if (tune->parsed()) return cmd_tune(data_path, config_path, criterion, out_path);
        if (tune_sim_cmd->parsed()) return cmd_tune_sim(plant_spec, config_path, out_path);
        if (eval->parsed()) return cmd_evaluate(plant_spec, phi_str, config_path);
        if (cmp->parsed()) return cmd_compare(outcome_dirs, plant_spec, config_path, out_path);
        if (freq->parsed()) return cmd_freq_response(gamma, config_path, out_path);
    } catch (const DataInvalidError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidData;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        // Domain errors during tuning are optimizer failures from the CLI's
        // point of view; everything else is a generic failure.
        return kExitOptimizerFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

}  // namespace fopid::cli
