#include "kinex/runner.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>

#include "kinex/errors.hpp"
#include "kinex/exchange.hpp"
#include "kinex/imitation.hpp"
#include "kinex/output.hpp"

namespace kinex {

namespace {

constexpr std::size_t kLambdaBins = 50;

class Recorder {
public:
  Recorder(MarketState& state, const RunConfig& cfg, std::vector<SeriesPoint>& series)
      : state_(state), series_(series), every_(cfg.series_every),
        enabled_(cfg.model() == ModelKind::Imitation) {
    record();
  }

  // Trades until trades_done == target, sampling the average lambda on the way.
  void advance_to(std::uint64_t target) {
    if (!enabled_) {
      run_trades(state_, target - state_.trades_done);
      return;
    }
    while (state_.trades_done < target) {
      step(state_);
      if (state_.trades_done % every_ == 0) record();
    }
  }

  // Imitation strategy phase: trades until one lambda survives or the cap is hit.
  std::optional<double> run_to_consensus(std::uint64_t cap) {
    std::optional<double> consensus = detect_consensus(*state_.census);
    while (!consensus && state_.trades_done < cap) {
      step(state_);
      if (state_.trades_done % every_ == 0) record();
      if (state_.census->distinct() == 1) consensus = detect_consensus(*state_.census);
    }
    return consensus;
  }

private:
  void record() {
    if (enabled_) series_.push_back({state_.trades_done, average_lambda(state_)});
  }

  MarketState& state_;
  std::vector<SeriesPoint>& series_;
  std::uint64_t every_;
  bool enabled_;
};

void warn(RunManifest& manifest, std::string message) {
  std::cerr << "warning: run " << manifest.run_index << ": " << message << '\n';
  manifest.warnings.push_back(std::move(message));
}

void compute_statistics(const RunConfig& cfg, RunResult& result) {
  RunManifest& m = result.manifest;
  const ModelKind model = cfg.model();

  if (result.money_samples.empty()) {
    warn(m, "no snapshots recorded; money statistics skipped");
  } else {
    try {
      result.money_density = histogram(result.money_samples, cfg.binning.edges(), cfg.binning.scale);
    } catch (const std::exception& e) {
      warn(m, std::string("money density unavailable: ") + e.what());
    }
    if (model == ModelKind::CCM || model == ModelKind::Polya) {
      try {
        m.tail_fit = estimate_tail_exponent(result.money_samples, cfg.tail_fraction);
      } catch (const std::exception& e) {
        warn(m, std::string("tail fit unavailable: ") + e.what());
      }
    } else {
      try {
        m.gamma_fit = gamma_moment_fit(result.money_samples);
      } catch (const std::exception& e) {
        warn(m, std::string("gamma fit unavailable: ") + e.what());
      }
      if (result.money_density && cfg.binning.scale == BinScale::Linear) {
        try {
          m.mode_count = count_modes(*result.money_density, cfg.smoothing_window, cfg.mode_prominence);
        } catch (const std::exception& e) {
          warn(m, std::string("mode count unavailable: ") + e.what());
        }
      }
    }
  }

  if (model == ModelKind::CCM || model == ModelKind::Polya || model == ModelKind::Imitation) {
    result.lambda_density = histogram(result.final_lambdas, linear_edges(0.0, 1.0, kLambdaBins));
  }
}

}  // namespace

RunResult simulate(const RunConfig& cfg, std::uint64_t run_index) {
  validate(cfg);
  RunResult result;
  RunManifest& m = result.manifest;
  m.config = cfg;
  m.run_index = run_index;
  m.stream_seed = substream_seed(cfg.seed, run_index);

  MarketState state = make_market(cfg.n_agents, cfg.rule, RandomStream::substream(cfg.seed, run_index));
  m.start_trade = state.trades_done;
  m.total_money_initial = state.money_sum();

  Recorder recorder(state, cfg, result.series);
  if (cfg.model() == ModelKind::Imitation) {
    m.consensus_lambda = recorder.run_to_consensus(cfg.max_consensus_trades);
    if (m.consensus_lambda) {
      m.consensus_trade = state.trades_done;
    } else {
      warn(m, "no consensus within " + std::to_string(cfg.max_consensus_trades) + " trades");
    }
  }

  // Burn-in and snapshots are measured from the start of the money phase.
  const std::uint64_t phase_start = state.trades_done;
  result.money_samples.reserve(cfg.n_snapshots * cfg.n_agents);
  for (std::uint64_t k = 1; k <= cfg.n_snapshots; ++k) {
    recorder.advance_to(phase_start + cfg.burn_in + k * cfg.snapshot_every);
    for (const Agent& a : state.agents) result.money_samples.push_back(a.money);
  }
  recorder.advance_to(phase_start + cfg.n_trades);

  m.end_trade = state.trades_done;
  m.total_money_final = state.money_sum();
  m.conservation_ok = std::abs(m.total_money_final - m.total_money_initial) <=
                      kConservationTolerance * m.total_money_initial;
  m.n_snapshot_samples = result.money_samples.size();
  if (!m.conservation_ok) warn(m, "money conservation violated");

  result.final_lambdas.reserve(state.agents.size());
  for (const Agent& a : state.agents) result.final_lambdas.push_back(a.lambda);

  compute_statistics(cfg, result);
  return result;
}

RunResult run_model(const RunConfig& cfg, std::uint64_t run_index) {
  RunResult result = simulate(cfg, run_index);
  if (!cfg.output_dir.empty()) write_outputs(result, cfg.output_dir);
  return result;
}

std::size_t worker_count() {
  if (const char* env = std::getenv("KINEX_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

EnsembleResult run_ensemble(const RunConfig& cfg, std::size_t n_runs) {
  if (n_runs < 1) throw DomainError("run_ensemble: n_runs must be at least 1");
  validate(cfg);

  EnsembleResult ensemble;
  ensemble.runs.resize(n_runs);
  std::vector<std::exception_ptr> errors(n_runs);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t k = next++; k < n_runs; k = next++) {
      try {
        RunConfig member = cfg;
        if (!cfg.output_dir.empty()) {
          char name[32];
          std::snprintf(name, sizeof name, "run_%03zu", k);
          member.output_dir = (std::filesystem::path(cfg.output_dir) / name).string();
        }
        ensemble.runs[k] = run_model(member, k);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };

  const std::size_t n_workers = std::min(worker_count(), n_runs);
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }

  for (std::size_t k = 0; k < n_runs; ++k) {
    if (!errors[k]) continue;
    try {
      std::rethrow_exception(errors[k]);
    } catch (const std::exception& e) {
      throw std::runtime_error("run " + std::to_string(k) + ": " + e.what());
    }
  }

  std::vector<DensityEstimate> densities;
  for (const RunResult& r : ensemble.runs) {
    if (r.money_density) densities.push_back(*r.money_density);
  }
  if (!densities.empty() && densities.size() == n_runs) {
    ensemble.pooled_density = average_densities(densities);
    if (!cfg.output_dir.empty()) {
      write_text_file(std::filesystem::path(cfg.output_dir) / "pooled_density.csv",
                      density_csv(*ensemble.pooled_density));
    }
  }
  return ensemble;
}

}  // namespace kinex
