#include "fopid/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace fopid::io {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

double parse_double(const std::string& s, const std::string& context) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("cannot parse number '" + s + "' for " + context);
    }
}

long parse_long(const std::string& s, const std::string& context) {
    try {
        std::size_t pos = 0;
        const long v = std::stol(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("cannot parse integer '" + s + "' for " + context);
    }
}

std::vector<double> parse_double_list(const std::string& s, const std::string& context) {
    std::vector<double> out;
    for (const std::string& item : split(s, ',')) out.push_back(parse_double(item, context));
    if (out.empty()) throw ConfigError("empty number list for " + context);
    return out;
}

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    return in;
}

// key = value lines with '#' comments; preserves insertion order checking.
std::map<std::string, std::string> parse_kv(std::istream& in, const std::string& what) {
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(what + ": line " + std::to_string(lineno) + " is not 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(what + ": empty key on line " + std::to_string(lineno));
        if (!kv.emplace(key, value).second) throw ConfigError(what + ": duplicate key '" + key + "'");
    }
    return kv;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_data_csv(const std::filesystem::path& path, const DataRecord& data) {
    std::ofstream out = open_out(path);
    out << "# sample_time=" << format_double(data.u.sample_time) << "\n";
    if (!data.meta.empty()) out << "# " << data.meta << "\n";
    out << "k,t,u,y\n";
    for (std::size_t k = 0; k < data.u.size(); ++k) {
        out << k << "," << format_double(static_cast<double>(k) * data.u.sample_time) << ","
            << format_double(data.u[k]) << "," << format_double(data.y[k]) << "\n";
    }
}

DataRecord read_data_csv(const std::filesystem::path& path) {
    std::ifstream in = open_in(path);
    std::string line;
    double sample_time = 0.0;
    bool have_ts = false;
    bool have_header = false;
    std::vector<double> u, y;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty()) continue;
        if (line[0] == '#') {
            const std::string body = trim(line.substr(1));
            if (body.rfind("sample_time=", 0) == 0) {
                sample_time = parse_double(body.substr(12), "sample_time");
                have_ts = true;
            }
            continue;
        }
        if (!have_header) {
            if (line != "k,t,u,y") throw ConfigError(path.string() + ": expected header 'k,t,u,y'");
            have_header = true;
            continue;
        }
        const auto cols = split(line, ',');
        if (cols.size() != 4) {
            throw ConfigError(path.string() + ": line " + std::to_string(lineno) + " needs 4 columns");
        }
        u.push_back(parse_double(cols[2], "u"));
        y.push_back(parse_double(cols[3], "y"));
    }
    if (!have_ts) throw ConfigError(path.string() + ": missing '# sample_time=' line");
    if (u.empty()) throw ConfigError(path.string() + ": no data rows");
    return make_data_record(make_sequence(std::move(u), sample_time),
                            make_sequence(std::move(y), sample_time), path.filename().string());
}

void write_sequence_csv(const std::filesystem::path& path, const Sequence& s, const std::string& column) {
    std::ofstream out = open_out(path);
    out << "k,t," << column << "\n";
    for (std::size_t k = 0; k < s.size(); ++k) {
        out << k << "," << format_double(static_cast<double>(k) * s.sample_time) << ","
            << format_double(s[k]) << "\n";
    }
}

void write_multi_sequence_csv(const std::filesystem::path& path,
                              const std::vector<std::pair<std::string, Sequence>>& columns) {
    if (columns.empty()) throw ConfigError("no sequences to write");
    std::ofstream out = open_out(path);
    out << "k,t";
    for (const auto& [label, seq] : columns) out << "," << label;
    out << "\n";
    const std::size_t n = columns.front().second.size();
    const double ts = columns.front().second.sample_time;
    for (std::size_t k = 0; k < n; ++k) {
        out << k << "," << format_double(static_cast<double>(k) * ts);
        for (const auto& [label, seq] : columns) {
            out << "," << (k < seq.size() ? format_double(seq[k]) : "");
        }
        out << "\n";
    }
}

void write_trace_csv(const std::filesystem::path& path, const std::vector<TracePoint>& trace,
                     const std::optional<double>& fixed_lambda) {
    std::ofstream out = open_out(path);
    out << "evaluations,best_objective,kfp,kfi,kfd,lambda,mu\n";
    for (const TracePoint& tp : trace) {
        const FoPidParams phi = decode_params(tp.best_position, fixed_lambda);
        out << tp.evaluations << "," << format_double(tp.best_objective) << ","
            << format_double(phi.k_fp) << "," << format_double(phi.k_fi) << ","
            << format_double(phi.k_fd) << "," << format_double(phi.lambda) << ","
            << format_double(phi.mu) << "\n";
    }
}

void write_outcome_json(const std::filesystem::path& path, const TuningOutcome& outcome,
                        const TuningConfig& cfg) {
    json j;
    j["strategy"] = outcome.strategy;
    j["criterion"] = cfg.criterion == Criterion::Itae ? "itae" : "iae";
    j["phi_star"] = {{"kfp", outcome.phi_star.k_fp},
                     {"kfi", outcome.phi_star.k_fi},
                     {"kfd", outcome.phi_star.k_fd},
                     {"lambda", outcome.phi_star.lambda},
                     {"mu", outcome.phi_star.mu}};
    j["objective_value"] = outcome.objective_value;
    j["evaluations"] = outcome.evaluations;
    j["sample_time"] = cfg.sample_time;
    j["setpoint"] = cfg.setpoint;
    std::ofstream out = open_out(path);
    out << j.dump(2) << "\n";
}

TuningOutcome read_outcome_json(const std::filesystem::path& path) {
    std::ifstream in = open_in(path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    TuningOutcome out;
    try {
        out.strategy = j.at("strategy").get<std::string>();
        const json& phi = j.at("phi_star");
        out.phi_star = {phi.at("kfp").get<double>(), phi.at("kfi").get<double>(),
                        phi.at("kfd").get<double>(), phi.at("lambda").get<double>(),
                        phi.at("mu").get<double>()};
        out.objective_value = j.at("objective_value").get<double>();
        out.evaluations = j.value("evaluations", std::size_t{0});
    } catch (const json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return out;
}

void write_compare_csv(const std::filesystem::path& path, const CompareReport& report) {
    std::ofstream out = open_out(path);
    out << "strategy,kfp,kfi,kfd,lambda,mu,surrogate_objective,itae,iae,overshoot_pct,"
           "settling_time_s,steady_state_error,stable\n";
    for (const CompareRow& r : report.rows) {
        out << r.strategy << "," << format_double(r.phi_star.k_fp) << ","
            << format_double(r.phi_star.k_fi) << "," << format_double(r.phi_star.k_fd) << ","
            << format_double(r.phi_star.lambda) << "," << format_double(r.phi_star.mu) << ","
            << format_double(r.surrogate_objective) << "," << format_double(r.realized.itae) << ","
            << format_double(r.realized.iae) << "," << format_double(r.realized.overshoot_pct) << ","
            << format_double(r.realized.settling_time_s) << ","
            << format_double(r.realized.steady_state_error) << "," << (r.realized.stable ? 1 : 0)
            << "\n";
    }
}

TuningConfig parse_config_text(const std::string& text) {
    std::istringstream in(text);
    auto kv = parse_kv(in, "config");
    TuningConfig cfg = default_tuning_config();

    auto take = [&](const char* key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };

    if (auto v = take("sample_time")) cfg.sample_time = parse_double(*v, "sample_time");
    if (auto v = take("horizon_seconds")) cfg.horizon_seconds = parse_double(*v, "horizon_seconds");
    if (auto v = take("setpoint")) cfg.setpoint = parse_double(*v, "setpoint");

    if (auto v = take("weight.kind")) {
        if (*v == "linear") {
            cfg.weight.kind = WeightKind::Linear;
        } else if (*v == "saturated") {
            cfg.weight.kind = WeightKind::Saturated;
        } else {
            throw ConfigError("weight.kind must be 'linear' or 'saturated', got '" + *v + "'");
        }
    }
    if (auto v = take("weight.alpha")) cfg.weight.alpha = parse_double(*v, "weight.alpha");

    if (auto v = take("oustaloup.order")) cfg.oustaloup.order = static_cast<int>(parse_long(*v, "oustaloup.order"));
    if (auto v = take("oustaloup.omega_low")) cfg.oustaloup.omega_low = parse_double(*v, "oustaloup.omega_low");
    if (auto v = take("oustaloup.omega_high")) cfg.oustaloup.omega_high = parse_double(*v, "oustaloup.omega_high");

    if (auto v = take("fixed.lambda")) {
        const double lam = parse_double(*v, "fixed.lambda");
        if (lam < 0.0 || lam > 2.0) throw ConfigError("fixed.lambda must lie in [0, 2]");
        cfg.fixed_lambda = lam;
    }

    struct BoundKey {
        const char* key;
        std::size_t index;  // position in the full 5-vector
    };
    const BoundKey bound_keys[] = {{"bounds.kfp", 0}, {"bounds.kfi", 1}, {"bounds.kfd", 2},
                                   {"bounds.lambda", 3}, {"bounds.mu", 4}};
    Bounds full = default_bounds(false);
    for (const auto& bk : bound_keys) {
        if (auto v = take(bk.key)) {
            const auto pair = parse_double_list(*v, bk.key);
            if (pair.size() != 2) throw ConfigError(std::string(bk.key) + " must be 'lo,hi'");
            if (!(pair[0] <= pair[1])) throw ConfigError(std::string(bk.key) + ": lo must be <= hi");
            if (pair[0] < 0.0) throw ConfigError(std::string(bk.key) + ": parameters are nonnegative");
            if (bk.index >= 3 && pair[1] > 2.0) {
                throw ConfigError(std::string(bk.key) + ": fractional orders lie in [0, 2]");
            }
            full.lower[bk.index] = pair[0];
            full.upper[bk.index] = pair[1];
        }
    }
    cfg.bounds = full;
    if (cfg.fixed_lambda) {
        cfg.bounds.lower.erase(cfg.bounds.lower.begin() + 3);
        cfg.bounds.upper.erase(cfg.bounds.upper.begin() + 3);
    }

    if (auto v = take("pso.population")) {
        const long p = parse_long(*v, "pso.population");
        if (p < 2) throw ConfigError("pso.population must be >= 2");
        cfg.pso.population = static_cast<std::size_t>(p);
    }
    if (auto v = take("pso.max_evaluations")) {
        const long p = parse_long(*v, "pso.max_evaluations");
        if (p < 1) throw ConfigError("pso.max_evaluations must be >= 1");
        cfg.pso.max_evaluations = static_cast<std::size_t>(p);
    }
    if (auto v = take("pso.seed")) {
        const long seed = parse_long(*v, "pso.seed");
        if (seed < 0) throw ConfigError("pso.seed must be nonnegative");
        cfg.pso.seed = static_cast<std::uint64_t>(seed);
    }

    if (auto v = take("singularity_eps")) cfg.singularity_eps = parse_double(*v, "singularity_eps");
    if (auto v = take("prefilter.window")) {
        const long wnd = parse_long(*v, "prefilter.window");
        if (wnd < 1 || wnd % 2 == 0) throw ConfigError("prefilter.window must be a positive odd integer");
        cfg.prefilter_window = static_cast<std::size_t>(wnd);
    }

    if (!kv.empty()) throw ConfigError("unknown config key '" + kv.begin()->first + "'");

    cfg.weight.sample_time = cfg.sample_time;
    cfg.horizon_steps();  // validate divisibility early
    return cfg;
}

TuningConfig read_config_file(const std::filesystem::path& path) {
    std::ifstream in = open_in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config_text(buf.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

PlantModel read_plant_file(const std::filesystem::path& path, double sample_time) {
    std::ifstream in = open_in(path);
    auto kv = parse_kv(in, path.string());
    std::string type = "ct";
    if (auto it = kv.find("type"); it != kv.end()) {
        type = it->second;
        kv.erase(it);
    }
    std::string label = path.stem().string();
    if (auto it = kv.find("label"); it != kv.end()) {
        label = it->second;
        kv.erase(it);
    }
    auto need = [&](const char* key) {
        auto it = kv.find(key);
        if (it == kv.end()) throw ConfigError(path.string() + ": missing '" + key + "'");
        auto v = parse_double_list(it->second, key);
        kv.erase(it);
        return v;
    };
    const std::vector<double> num = need("num");
    const std::vector<double> den = need("den");
    if (!kv.empty()) throw ConfigError(path.string() + ": unknown key '" + kv.begin()->first + "'");
    if (type == "ct") return PlantModel(make_continuous_tf(num, den), label);
    if (type == "dt") return PlantModel(make_discrete_tf(num, den, sample_time), label);
    throw ConfigError(path.string() + ": type must be 'ct' or 'dt'");
}

}  // namespace fopid::io
