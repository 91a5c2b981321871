#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fopid/pipeline.hpp"

// Flat-file surface shared by the CLI and the pipeline: the data CSV
// (header `k,t,u,y`, one row per sample, sample time declared in a
// `# sample_time=<v>` comment line), plot-ready response/trace CSVs, the
// key=value run config, and the outcome JSON. Floating-point values are
// serialized with 17 significant digits so write-then-read round-trips
// bit-exactly.
namespace fopid::io {

std::string format_double(double v);  // shortest 17-significant-digit form

void write_data_csv(const std::filesystem::path& path, const DataRecord& data);
DataRecord read_data_csv(const std::filesystem::path& path);

// k,t,<column> rows for a single sequence.
void write_sequence_csv(const std::filesystem::path& path, const Sequence& s, const std::string& column);

// k,t plus one column per labeled sequence (all on the same grid).
void write_multi_sequence_csv(const std::filesystem::path& path,
                              const std::vector<std::pair<std::string, Sequence>>& columns);

void write_trace_csv(const std::filesystem::path& path, const std::vector<TracePoint>& trace,
                     const std::optional<double>& fixed_lambda);

void write_outcome_json(const std::filesystem::path& path, const TuningOutcome& outcome,
                        const TuningConfig& cfg);
TuningOutcome read_outcome_json(const std::filesystem::path& path);

void write_compare_csv(const std::filesystem::path& path, const CompareReport& report);

// Run config: flat `key = value` lines, '#' comments. Unknown keys are
// rejected; missing keys keep the defaults from TuningConfig.
TuningConfig parse_config_text(const std::string& text);
TuningConfig read_config_file(const std::filesystem::path& path);

// Plant description file: `num = c0,c1,...` / `den = ...` (descending
// powers of s), optional `type = ct|dt` (dt coefficients are b/a at the
// configured sample_time) and `label = ...`.
PlantModel read_plant_file(const std::filesystem::path& path, double sample_time);

}  // namespace fopid::io
