#pragma once

#include <span>

#include "kinex/exchange.hpp"
#include "kinex/savings.hpp"

namespace kinex {

// One trade of the imitation model. The pair trades with the heterogeneous
// kernel; agent i wins iff epsilon >= 0.5, otherwise j wins. The loser then
// takes the winner's lambda and the census moves one agent accordingly.
void imitation_trade_step(std::span<Agent> agents, StrategyCensus& census, const TradeDraw& draw);

StrategyCensus census_of(std::span<const Agent> agents);

double average_lambda(std::span<const Agent> agents);
double average_lambda(const MarketState& state);

}  // namespace kinex
