#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "kinex/exchange.hpp"
#include "kinex/savings.hpp"
#include "kinex/stats.hpp"

namespace kinex {

// Bin layout for the money density. Linear bins use [min, max] split into
// `bins`; logarithmic bins use constant `ratio` starting at `min`.
struct Binning {
  BinScale scale = BinScale::Linear;
  double min = 0.0;
  double max = 5.0;
  std::size_t bins = 100;
  double ratio = 1.25;

  std::vector<double> edges() const;
  bool operator==(const Binning&) const = default;
};

// Linear [0, 5] in 100 bins for gamma-like models, log bins from 1e-3 to the
// total money for the heavy-tailed ones.
Binning default_binning(ModelKind model, std::size_t n_agents);

struct RunConfig {
  SavingsRule rule = ConstantRule{0.5};
  std::size_t n_agents = 100;
  std::uint64_t n_trades = 1'000'000;
  std::uint64_t burn_in = 500'000;
  std::uint64_t snapshot_every = 100;
  std::uint64_t n_snapshots = 1'000;
  std::uint64_t seed = 1;
  // Imitation: cap on the strategy phase before money equilibration starts.
  std::uint64_t max_consensus_trades = 10'000'000;
  // Imitation: spacing of the average-lambda series.
  std::uint64_t series_every = 100;
  Binning binning;
  double tail_fraction = kDefaultTailFraction;
  std::size_t smoothing_window = kDefaultSmoothingWindow;
  double mode_prominence = kDefaultModeProminence;
  std::string output_dir;

  ModelKind model() const { return model_of(rule); }
  bool operator==(const RunConfig&) const = default;

  // Defaults with the sweep-dependent fields (snapshot and series spacing,
  // binning) resolved for this rule and population.
  static RunConfig defaults(const SavingsRule& rule, std::size_t n_agents = 100);
};

class ConfigError : public std::runtime_error {
public:
  ConfigError(const std::string& message, std::size_t line = 0, std::string field = {});
  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

private:
  std::size_t line_;
  std::string field_;
};

// Throws ConfigError naming the field whose invariant fails.
void validate(const RunConfig& cfg);

// Flat `key = value` text, one entry per line, `#` starts a comment.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

// Inverse of parse_config for every field.
std::string to_config_text(const RunConfig& cfg);

}  // namespace kinex
