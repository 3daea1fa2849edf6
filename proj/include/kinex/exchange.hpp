#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "kinex/rng.hpp"
#include "kinex/savings.hpp"

namespace kinex {

enum class ModelKind { CC, CCM, SelfOrgDecreasing, SelfOrgIncreasing, Polya, Imitation };

std::string_view to_string(ModelKind model);
std::optional<ModelKind> parse_model(std::string_view name);

// The model a savings rule drives.
ModelKind model_of(const SavingsRule& rule);

struct Agent {
  double money = 1.0;
  double lambda = 0.0;
  // Only populated for urn-driven agents; holds the urn the lambda was frozen from.
  std::optional<UrnState> urn;

  bool operator==(const Agent&) const = default;
};

struct TradeDraw {
  std::size_t i = 0;
  std::size_t j = 1;
  double epsilon = 0.5;
};

// Two-agent exchange economy used to price the goods in one trade.
struct ClearingInput {
  double money_i = 1.0;
  double money_j = 1.0;
  double quantity_i = 1.0;
  double quantity_j = 1.0;
  double alpha_i = 0.25;
  double alpha_j = 0.25;
  double lambda = 0.5;
};

struct TradeResult {
  double money_i;
  double money_j;
};

// Homogeneous kernel: both agents keep lambda of their money and split the
// pooled remainder as epsilon : 1 - epsilon.
TradeResult cc_trade(double money_i, double money_j, double lambda, double epsilon);

// Heterogeneous kernel: each agent keeps its own lambda share, the rest is pooled.
TradeResult ccm_trade(double money_i, double money_j, double lambda_i, double lambda_j,
                      double epsilon);

// Market clearing prices p_k = (alpha_k / lambda) (M_i + M_j) / Q_k.
std::pair<double, double> clearing_prices(const ClearingInput& input);

struct MarketState {
  std::vector<Agent> agents;
  std::uint64_t trades_done = 0;
  double total_money = 0.0;
  RandomStream rng;
  SavingsRule rule;
  // Present for the imitation model only.
  std::optional<StrategyCensus> census;

  ModelKind model() const { return model_of(rule); }
  std::size_t size() const { return agents.size(); }
  double money_sum() const;
};

// N agents with one unit of money each; lambdas drawn according to `rule`
// (urn warmup included) from `rng`.
MarketState make_market(std::size_t n_agents, const SavingsRule& rule, RandomStream rng);

// Uniform ordered pair of distinct agents plus a fresh epsilon.
TradeDraw select_pair(MarketState& state);

// Applies one trade for the given draw: resolves lambdas for the model,
// runs the matching kernel and, for imitation, updates strategies and census.
void apply_trade(MarketState& state, const TradeDraw& draw);

void step(MarketState& state);
void run_trades(MarketState& state, std::uint64_t count);

}  // namespace kinex
