#pragma once

// JSON and text serialization of configs, models, and reports.

#include "ecoamlp/harness.hpp"

#include "json.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace ecoamlp {

using Json = nlohmann::ordered_json;

/// Array of {id, pcl, deviation, kdist, score}, strongest outlier first.
Json outlier_report_json(const OutlierReport& report);
Json outlier_params_json(const OutlierParams& params);

Json network_json(const MlpNetwork& net);
MlpNetwork network_from_json(const Json& doc);

Json eval_json(const EvalReport& report);
Json history_json(const std::vector<GenerationRecord>& history);

/// Flat document; every key is optional on input and falls back to the
/// defaults of ExperimentConfig. Unknown keys are a ConfigError.
Json config_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const Json& doc);
ExperimentConfig config_from_json(const Json& doc, ExperimentConfig defaults);

/// The "generated_at" key is only written when a timestamp is given.
Json run_report_json(const RunReport& report, const std::optional<std::string>& timestamp = std::nullopt);
std::string run_report_text(const RunReport& report);

Json sweep_json(const SweepReport& sweep, const std::optional<std::string>& timestamp = std::nullopt);
/// One row per variant with median test accuracy, WMR and WMP in percent.
std::string sweep_text(const SweepReport& sweep);

/// Percent with two decimals, e.g. 0.887 -> "88.70".
std::string percent(double fraction);

/// Current UTC time as ISO-8601.
std::string utc_timestamp();

/// Writes to "<path>.tmp" then renames over path.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Writes report.json and report.txt into `directory` (created if needed).
void write_report_files(const std::filesystem::path& directory, const Json& doc, const std::string& text);

} // namespace ecoamlp
