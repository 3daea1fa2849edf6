#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kinex/config.hpp"
#include "kinex/stats.hpp"

namespace kinex {

inline constexpr int kManifestSchemaVersion = 1;
inline constexpr const char* kArtifactVersion = "1.0.0";

struct RunManifest {
  int schema_version = kManifestSchemaVersion;
  std::string artifact_version = kArtifactVersion;
  RunConfig config;
  std::uint64_t run_index = 0;
  std::uint64_t stream_seed = 0;
  std::uint64_t start_trade = 0;
  std::uint64_t end_trade = 0;
  double total_money_initial = 0.0;
  double total_money_final = 0.0;
  bool conservation_ok = false;
  std::uint64_t n_snapshot_samples = 0;
  std::optional<TailFit> tail_fit;
  std::optional<std::size_t> mode_count;
  std::optional<GammaFit> gamma_fit;
  std::optional<double> consensus_lambda;
  std::optional<std::uint64_t> consensus_trade;
  std::vector<std::string> files;
  std::vector<std::string> warnings;

  bool operator==(const RunManifest&) const = default;
};

inline constexpr double kConservationTolerance = 1e-9;

struct SeriesPoint {
  std::uint64_t trade = 0;
  double avg_lambda = 0.0;
  bool operator==(const SeriesPoint&) const = default;
};

// Everything one run produces. The money samples are the pooled snapshot
// values (n_snapshots * n_agents of them, snapshot-major).
struct RunResult {
  RunManifest manifest;
  std::vector<double> money_samples;
  std::vector<double> final_lambdas;
  std::optional<DensityEstimate> money_density;
  std::optional<DensityEstimate> lambda_density;
  std::vector<SeriesPoint> series;
};

// Runs one member of the ensemble on substream (cfg.seed, run_index) without
// touching the filesystem.
RunResult simulate(const RunConfig& cfg, std::uint64_t run_index = 0);

// simulate() followed by write_outputs() into cfg.output_dir when it is set.
RunResult run_model(const RunConfig& cfg, std::uint64_t run_index = 0);

struct EnsembleResult {
  std::vector<RunResult> runs;
  std::optional<DensityEstimate> pooled_density;
};

// Runs members 0..n_runs-1 on independent substreams. Members are spread over
// worker threads (KINEX_WORKERS overrides the count); results are ordered by
// run index regardless of scheduling. When cfg.output_dir is set each member
// writes into <output_dir>/run_<k>, followed by pooled_density.csv.
EnsembleResult run_ensemble(const RunConfig& cfg, std::size_t n_runs);

std::size_t worker_count();

}  // namespace kinex
