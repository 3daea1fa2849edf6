#include "kinex/imitation.hpp"

#include <stdexcept>
#include <vector>

namespace kinex {

void imitation_trade_step(std::span<Agent> agents, StrategyCensus& census, const TradeDraw& draw) {
  Agent& first = agents[draw.i];
  Agent& second = agents[draw.j];
  const auto [mi, mj] = ccm_trade(first.money, second.money, first.lambda, second.lambda, draw.epsilon);
  first.money = mi;
  second.money = mj;

  const bool first_wins = draw.epsilon >= 0.5;
  Agent& winner = first_wins ? first : second;
  Agent& loser = first_wins ? second : first;
  census.move(loser.lambda, winner.lambda);
  loser.lambda = winner.lambda;
}

StrategyCensus census_of(std::span<const Agent> agents) {
  std::vector<double> lambdas;
  lambdas.reserve(agents.size());
  for (const Agent& a : agents) lambdas.push_back(a.lambda);
  return StrategyCensus::from_lambdas(lambdas);
}

double average_lambda(std::span<const Agent> agents) {
  if (agents.empty()) throw std::invalid_argument("average_lambda: no agents");
  double sum = 0.0;
  for (const Agent& a : agents) sum += a.lambda;
  return sum / static_cast<double>(agents.size());
}

double average_lambda(const MarketState& state) { return average_lambda(state.agents); }

}  // namespace kinex
