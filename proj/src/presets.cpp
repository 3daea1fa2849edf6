#include "kinex/presets.hpp"

#include <cstdio>
#include <stdexcept>

namespace kinex {

namespace {

std::string number_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// 100 agents, 1e6 trades, half of it burn-in, 1000 one-sweep snapshots.
RunConfig standard(const SavingsRule& rule) { return RunConfig::defaults(rule, 100); }

// 1e5 trades: burn-in 5e4, then `snapshots` evenly spaced over the rest.
RunConfig short_run(const SavingsRule& rule, std::uint64_t snapshots) {
  RunConfig cfg = RunConfig::defaults(rule, 100);
  cfg.n_trades = 100'000;
  cfg.burn_in = 50'000;
  cfg.n_snapshots = snapshots;
  cfg.snapshot_every = 50'000 / snapshots;
  return cfg;
}

}  // namespace

std::vector<std::string> preset_ids() { return {"fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7"}; }

std::vector<PresetMember> preset(std::string_view id) {
  std::vector<PresetMember> members;
  if (id == "fig1") {
    for (double lambda : {0.0, 0.2, 0.5, 0.8}) {
      members.push_back({"lambda_" + number_label(lambda), standard(ConstantRule{lambda}),
                         "homogeneous savings, 100 agents, 1e6 trades"});
    }
  } else if (id == "fig2") {
    members.push_back({"ccm", standard(QuenchedUniformRule{}),
                       "quenched uniform savings, 100 agents, 1e6 trades, log bins"});
  } else if (id == "fig3") {
    for (double c2 : {0.1, 0.5, 1.0, 2.0, 4.0}) {
      members.push_back({"c2_" + number_label(c2), short_run(MoneyDependentRule{LambdaForm::Decreasing, 0.95, c2}, 1000),
                         "savings decreasing in money, c1 = 0.95, 1e5 trades"});
    }
  } else if (id == "fig4") {
    for (auto [a, b] : {std::pair{1.0, 1.0}, {2.0, 2.0}, {4.0, 4.0}, {4.0, 2.0}}) {
      RunConfig cfg = RunConfig::defaults(UrnRule{a, b, 10'000}, 1000);
      cfg.n_trades = 0;
      cfg.burn_in = 0;
      cfg.n_snapshots = 0;
      members.push_back({"a" + number_label(a) + "_b" + number_label(b), cfg,
                         "urn-frozen savings distribution only, 1000 agents, no trading"});
    }
  } else if (id == "fig5") {
    for (auto [a, b] : {std::pair{1.0, 1.0}, {4.0, 2.0}}) {
      members.push_back({"a" + number_label(a) + "_b" + number_label(b), standard(UrnRule{a, b, 10'000}),
                         "urn-frozen savings then exchange, 100 agents, 1e6 trades, log bins"});
    }
  } else if (id == "fig6") {
    RunConfig large = short_run(UrnRule{1e6, 1e6, 10'000}, 100);
    large.binning = default_binning(ModelKind::CC, 100);
    members.push_back({"a1e6_b1e6", large, "urn with a = b = 1e6, reduces to homogeneous lambda = 0.5"});
    RunConfig moderate = short_run(UrnRule{4.0, 4.0, 10'000}, 100);
    moderate.binning = default_binning(ModelKind::CC, 100);
    members.push_back({"a4_b4", moderate, "urn with a = b = 4, gamma-like bulk"});
  } else if (id == "fig7") {
    members.push_back({"imitation", standard(ImitationRule{}),
                       "winner imitation from uniform savings; average lambda series", 3});
  } else {
    throw std::invalid_argument("unknown figure id '" + std::string(id) + "' (expected fig1 ... fig7)");
  }
  return members;
}

}  // namespace kinex
