#include "kinex/savings.hpp"

#include <cmath>
#include <string>

#include "kinex/errors.hpp"

namespace kinex {

namespace {

bool in_unit_interval(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace

void validate(const SavingsRule& rule) {
  struct Visitor {
    void operator()(const ConstantRule& r) const {
      if (!in_unit_interval(r.lambda)) throw DomainError("constant rule: lambda must lie in [0,1]");
    }
    void operator()(const QuenchedUniformRule&) const {}
    void operator()(const MoneyDependentRule& r) const {
      if (!(r.c1 > 0.0 && r.c1 < 1.0)) throw DomainError("money-dependent rule: c1 must lie in (0,1)");
      if (!(r.c2 > 0.0) || !std::isfinite(r.c2)) throw DomainError("money-dependent rule: c2 must be positive");
    }
    void operator()(const UrnRule& r) const {
      if (!(r.a > 0.0) || !std::isfinite(r.a)) throw DomainError("urn rule: a must be positive");
      if (!(r.b > 0.0) || !std::isfinite(r.b)) throw DomainError("urn rule: b must be positive");
      if (r.warmup < 1) throw DomainError("urn rule: warmup must be at least 1");
    }
    void operator()(const ImitationRule&) const {}
  };
  std::visit(Visitor{}, rule);
}

Split optimal_split(double money, double lambda) {
  if (!(money >= 0.0)) throw DomainError("optimal_split: money must be nonnegative");
  if (!in_unit_interval(lambda)) throw DomainError("optimal_split: lambda must lie in [0,1]");
  const double saved = lambda * money;
  return {saved, money - saved};
}

double money_dependent_lambda(double money, LambdaForm form, double c1, double c2) {
  if (!(money >= 0.0)) throw DomainError("money_dependent_lambda: money must be nonnegative");
  validate(MoneyDependentRule{form, c1, c2});
  const double decay = std::exp(-c2 * money);
  return form == LambdaForm::Decreasing ? c1 * decay : c1 * (1.0 - decay);
}

UrnState UrnState::initial(double a, double b) {
  validate(UrnRule{a, b, 1});
  return UrnState{a, b, 0, 0};
}

UrnState urn_step(UrnState urn, double draw) {
  if (draw < urn.lambda()) {
    ++urn.saves;
  } else {
    ++urn.consumes;
  }
  return urn;
}

UrnState run_urn(double a, double b, std::uint64_t warmup, RandomStream& rng) {
  validate(UrnRule{a, b, warmup});
  UrnState urn = UrnState::initial(a, b);
  for (std::uint64_t t = 0; t < warmup; ++t) urn = urn_step(urn, rng.uniform());
  return urn;
}

double urn_limit(double a, double b, std::uint64_t warmup, RandomStream& rng) {
  return run_urn(a, b, warmup, rng).lambda();
}

StrategyCensus StrategyCensus::from_lambdas(std::span<const double> lambdas) {
  StrategyCensus census;
  for (double l : lambdas) ++census.counts_[l];
  census.total_ = lambdas.size();
  return census;
}

void StrategyCensus::move(double from, double to) {
  if (from == to) return;
  auto it = counts_.find(from);
  if (it == counts_.end() || it->second == 0) {
    throw std::logic_error("StrategyCensus::move: no agent holds lambda " + std::to_string(from));
  }
  auto target = counts_.find(to);
  if (target == counts_.end()) {
    throw std::logic_error("StrategyCensus::move: target lambda " + std::to_string(to) + " has no holder");
  }
  ++target->second;
  if (--it->second == 0) counts_.erase(it);
}

std::size_t StrategyCensus::count(double lambda) const {
  auto it = counts_.find(lambda);
  return it == counts_.end() ? 0 : it->second;
}

std::optional<double> detect_consensus(const StrategyCensus& census) {
  if (census.distinct() == 1 && census.counts().begin()->second == census.total()) {
    return census.counts().begin()->first;
  }
  return std::nullopt;
}

}  // namespace kinex
