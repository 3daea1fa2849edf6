#include "kinex/exchange.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "kinex/errors.hpp"
#include "kinex/imitation.hpp"

namespace kinex {

namespace {

constexpr std::array<std::pair<ModelKind, std::string_view>, 6> kModelNames{{
    {ModelKind::CC, "cc"},
    {ModelKind::CCM, "ccm"},
    {ModelKind::SelfOrgDecreasing, "selforg_decreasing"},
    {ModelKind::SelfOrgIncreasing, "selforg_increasing"},
    {ModelKind::Polya, "polya"},
    {ModelKind::Imitation, "imitation"},
}};

inline void check_money(double m, const char* who) {
  if (!(m >= 0.0)) throw DomainError(std::string(who) + ": money must be nonnegative");
}

inline void check_unit(double x, const char* who, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError(std::string(who) + ": " + what + " must lie in [0,1]");
}

}  // namespace

std::string_view to_string(ModelKind model) {
  for (const auto& [kind, name] : kModelNames) {
    if (kind == model) return name;
  }
  return "unknown";
}

std::optional<ModelKind> parse_model(std::string_view name) {
  for (const auto& [kind, n] : kModelNames) {
    if (n == name) return kind;
  }
  return std::nullopt;
}

ModelKind model_of(const SavingsRule& rule) {
  struct Visitor {
    ModelKind operator()(const ConstantRule&) const { return ModelKind::CC; }
    ModelKind operator()(const QuenchedUniformRule&) const { return ModelKind::CCM; }
    ModelKind operator()(const MoneyDependentRule& r) const {
      return r.form == LambdaForm::Decreasing ? ModelKind::SelfOrgDecreasing : ModelKind::SelfOrgIncreasing;
    }
    ModelKind operator()(const UrnRule&) const { return ModelKind::Polya; }
    ModelKind operator()(const ImitationRule&) const { return ModelKind::Imitation; }
  };
  return std::visit(Visitor{}, rule);
}

TradeResult cc_trade(double money_i, double money_j, double lambda, double epsilon) {
  check_money(money_i, "cc_trade");
  check_money(money_j, "cc_trade");
  check_unit(lambda, "cc_trade", "lambda");
  check_unit(epsilon, "cc_trade", "epsilon");
  const double pool = (1.0 - lambda) * (money_i + money_j);
  return {lambda * money_i + epsilon * pool, lambda * money_j + (1.0 - epsilon) * pool};
}

TradeResult ccm_trade(double money_i, double money_j, double lambda_i, double lambda_j,
                      double epsilon) {
  check_money(money_i, "ccm_trade");
  check_money(money_j, "ccm_trade");
  check_unit(lambda_i, "ccm_trade", "lambda_i");
  check_unit(lambda_j, "ccm_trade", "lambda_j");
  check_unit(epsilon, "ccm_trade", "epsilon");
  const double pool = (1.0 - lambda_i) * money_i + (1.0 - lambda_j) * money_j;
  return {lambda_i * money_i + epsilon * pool, lambda_j * money_j + (1.0 - epsilon) * pool};
}

std::pair<double, double> clearing_prices(const ClearingInput& c) {
  const double fields[] = {c.money_i, c.money_j, c.quantity_i, c.quantity_j, c.alpha_i, c.alpha_j};
  for (double f : fields) {
    if (!(f > 0.0) || !std::isfinite(f)) throw DomainError("clearing_prices: all inputs must be positive");
  }
  if (!(c.lambda > 0.0)) throw DomainError("clearing_prices: lambda must be positive (prices diverge at 0)");
  if (std::abs(c.alpha_i + c.alpha_j + c.lambda - 1.0) > 1e-12) {
    throw DomainError("clearing_prices: alpha_i + alpha_j + lambda must equal 1");
  }
  const double total = c.money_i + c.money_j;
  return {(c.alpha_i / c.lambda) * total / c.quantity_i, (c.alpha_j / c.lambda) * total / c.quantity_j};
}

double MarketState::money_sum() const {
  double sum = 0.0;
  for (const Agent& a : agents) sum += a.money;
  return sum;
}

MarketState make_market(std::size_t n_agents, const SavingsRule& rule, RandomStream rng) {
  if (n_agents < 2) throw DomainError("make_market: at least two agents are required");
  validate(rule);

  MarketState state{std::vector<Agent>(n_agents), 0, static_cast<double>(n_agents), std::move(rng), rule,
                    std::nullopt};
  for (Agent& a : state.agents) {
    if (const auto* r = std::get_if<ConstantRule>(&rule)) {
      a.lambda = r->lambda;
    } else if (std::holds_alternative<QuenchedUniformRule>(rule) || std::holds_alternative<ImitationRule>(rule)) {
      a.lambda = state.rng.uniform();
    } else if (const auto* r = std::get_if<MoneyDependentRule>(&rule)) {
      a.lambda = money_dependent_lambda(a.money, r->form, r->c1, r->c2);
    } else if (const auto* r = std::get_if<UrnRule>(&rule)) {
      a.urn = run_urn(r->a, r->b, r->warmup, state.rng);
      a.lambda = a.urn->lambda();
    }
  }
  if (std::holds_alternative<ImitationRule>(rule)) state.census = census_of(state.agents);
  return state;
}

TradeDraw select_pair(MarketState& state) {
  const std::size_t n = state.agents.size();
  if (n < 2) throw DomainError("select_pair: at least two agents are required");
  TradeDraw draw;
  draw.i = static_cast<std::size_t>(state.rng.below(n));
  draw.j = static_cast<std::size_t>(state.rng.below(n - 1));
  if (draw.j >= draw.i) ++draw.j;
  draw.epsilon = state.rng.uniform();
  return draw;
}

void apply_trade(MarketState& state, const TradeDraw& draw) {
  if (draw.i == draw.j || draw.i >= state.agents.size() || draw.j >= state.agents.size()) {
    throw DomainError("apply_trade: invalid agent pair");
  }
  Agent& ai = state.agents[draw.i];
  Agent& aj = state.agents[draw.j];

  if (const auto* constant = std::get_if<ConstantRule>(&state.rule)) {
    const auto [mi, mj] = cc_trade(ai.money, aj.money, constant->lambda, draw.epsilon);
    ai.money = mi;
    aj.money = mj;
  } else if (std::holds_alternative<ImitationRule>(state.rule)) {
    imitation_trade_step(state.agents, *state.census, draw);
  } else {
    // Money-dependent lambdas follow the pre-trade money; quenched and urn
    // lambdas are frozen on the agent.
    if (const auto* r = std::get_if<MoneyDependentRule>(&state.rule)) {
      ai.lambda = money_dependent_lambda(ai.money, r->form, r->c1, r->c2);
      aj.lambda = money_dependent_lambda(aj.money, r->form, r->c1, r->c2);
    }
    const auto [mi, mj] = ccm_trade(ai.money, aj.money, ai.lambda, aj.lambda, draw.epsilon);
    ai.money = mi;
    aj.money = mj;
  }
  ++state.trades_done;
}

void step(MarketState& state) { apply_trade(state, select_pair(state)); }

void run_trades(MarketState& state, std::uint64_t count) {
  for (std::uint64_t t = 0; t < count; ++t) step(state);
}

}  // namespace kinex
