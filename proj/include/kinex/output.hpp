#pragma once

#include <filesystem>
#include <span>
#include <string>

#include <json.hpp>

#include "kinex/runner.hpp"

namespace kinex {

nlohmann::json to_json(const RunConfig& cfg);
RunConfig config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const nlohmann::json& j);

// `bin_center,bin_width,density`, 17 significant digits.
std::string density_csv(const DensityEstimate& d);
// `trade,avg_lambda`.
std::string series_csv(std::span<const SeriesPoint> series);

// Writes the run's CSV files and manifest.json into `dir` and records the file
// names in the manifest. Without snapshots no density file is written and a
// warning is added. Throws std::runtime_error on I/O failure.
void write_outputs(RunResult& result, const std::filesystem::path& dir);

void write_text_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace kinex
