#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <variant>

#include "kinex/rng.hpp"

namespace kinex {

// Savings rules. One variant per mechanism that decides an agent's savings
// propensity lambda, the fraction of money held back from each trade.

// Every agent shares one fixed lambda.
struct ConstantRule {
  double lambda = 0.0;
  bool operator==(const ConstantRule&) const = default;
};

// Each agent draws lambda once, uniform on [0, 1), and keeps it.
struct QuenchedUniformRule {
  bool operator==(const QuenchedUniformRule&) const = default;
};

enum class LambdaForm { Decreasing, Increasing };

// lambda is a function of the agent's current money:
//   Decreasing: c1 * exp(-c2 m)      Increasing: c1 * (1 - exp(-c2 m))
struct MoneyDependentRule {
  LambdaForm form = LambdaForm::Increasing;
  double c1 = 0.95;
  double c2 = 1.0;
  bool operator==(const MoneyDependentRule&) const = default;
};

// lambda is the frozen share of a Polya urn after `warmup` reinforcement
// steps started from S = a, C = b.
struct UrnRule {
  double a = 1.0;
  double b = 1.0;
  std::uint64_t warmup = 10'000;
  bool operator==(const UrnRule&) const = default;
};

// Quenched uniform start; the loser of each trade copies the winner's lambda.
struct ImitationRule {
  bool operator==(const ImitationRule&) const = default;
};

using SavingsRule =
    std::variant<ConstantRule, QuenchedUniformRule, MoneyDependentRule, UrnRule, ImitationRule>;

// Throws DomainError when rule parameters break their invariants.
void validate(const SavingsRule& rule);

struct Split {
  double saved;
  double spent;
};

// Cobb-Douglas optimum with zero interest: save lambda * m, spend the rest.
Split optimal_split(double money, double lambda);

double money_dependent_lambda(double money, LambdaForm form, double c1, double c2);

// Polya urn for the save/consume decision. The reinforcement counts are kept
// as integers so that S + C - t == a + b holds exactly for every t.
struct UrnState {
  double a = 1.0;
  double b = 1.0;
  std::uint64_t saves = 0;
  std::uint64_t consumes = 0;

  static UrnState initial(double a, double b);

  double save_weight() const { return a + static_cast<double>(saves); }
  double consume_weight() const { return b + static_cast<double>(consumes); }
  std::uint64_t steps() const { return saves + consumes; }
  double lambda() const { return save_weight() / (save_weight() + consume_weight()); }

  bool operator==(const UrnState&) const = default;
};

// One reinforcement step: save is chosen iff draw < S / (S + C).
UrnState urn_step(UrnState urn, double draw);

// Runs `warmup` steps from (a, b) with draws taken from `rng`.
UrnState run_urn(double a, double b, std::uint64_t warmup, RandomStream& rng);

// The lambda an agent freezes after warmup.
double urn_limit(double a, double b, std::uint64_t warmup, RandomStream& rng);

// Number of agents holding each distinct lambda. Values are compared by exact
// bit equality: imitation only ever copies lambdas, it never recomputes them.
class StrategyCensus {
public:
  StrategyCensus() = default;
  static StrategyCensus from_lambdas(std::span<const double> lambdas);

  // Moves one agent from strategy `from` to strategy `to`.
  void move(double from, double to);

  std::size_t count(double lambda) const;
  std::size_t total() const { return total_; }
  std::size_t distinct() const { return counts_.size(); }
  const std::map<double, std::size_t>& counts() const { return counts_; }

  bool operator==(const StrategyCensus&) const = default;

private:
  std::map<double, std::size_t> counts_;
  std::size_t total_ = 0;
};

// The surviving lambda once a single strategy holds the whole population.
std::optional<double> detect_consensus(const StrategyCensus& census);

}  // namespace kinex
