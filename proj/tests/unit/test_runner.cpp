#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "kinex/output.hpp"
#include "kinex/presets.hpp"
#include "kinex/runner.hpp"

using namespace kinex;
namespace fs = std::filesystem;

namespace {

RunConfig small(const SavingsRule& rule, std::size_t n = 50) {
  RunConfig cfg = RunConfig::defaults(rule, n);
  cfg.n_trades = 60'000;
  cfg.burn_in = 10'000;
  cfg.n_snapshots = 100;
  cfg.snapshot_every = 500;
  return cfg;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "kinex_tests" / name;
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("run_model on CC with lambda 0 conserves money") {
  RunConfig cfg = RunConfig::defaults(ConstantRule{0.0}, 100);
  cfg.seed = 7;
  const RunResult r = run_model(cfg);
  CHECK(r.manifest.conservation_ok);
  CHECK(r.manifest.end_trade == 1'000'000);
  CHECK(r.money_samples.size() == 100'000);
  CHECK(std::abs(r.manifest.total_money_final - 100.0) < 1e-9 * 100.0);
  REQUIRE(r.manifest.gamma_fit);
  CHECK(std::abs(r.manifest.gamma_fit->shape - 1.0) < 0.1);
  CHECK(r.manifest.mode_count == 1u);
  CHECK_FALSE(r.manifest.tail_fit);
}

TEST_CASE("model-specific statistics") {
  const RunResult ccm = simulate(small(QuenchedUniformRule{}));
  CHECK(ccm.manifest.tail_fit);
  CHECK(ccm.lambda_density);

  const RunResult selforg = simulate(small(MoneyDependentRule{LambdaForm::Increasing, 0.95, 2.0}));
  CHECK(selforg.manifest.mode_count);

  RunConfig imitation = RunConfig::defaults(ImitationRule{}, 100);
  const RunResult im = simulate(imitation);
  REQUIRE(im.manifest.consensus_lambda);
  REQUIRE(im.manifest.consensus_trade);
  CHECK(im.manifest.end_trade == *im.manifest.consensus_trade + imitation.n_trades);
  for (double l : im.final_lambdas) CHECK(l == *im.manifest.consensus_lambda);
  REQUIRE_FALSE(im.series.empty());
  CHECK(im.series.front().trade == 0);
  for (std::size_t k = 1; k < im.series.size(); ++k) {
    REQUIRE(im.series[k].trade > im.series[k - 1].trade);
    REQUIRE(im.series[k].avg_lambda >= 0.0);
    REQUIRE(im.series[k].avg_lambda <= 1.0);
  }
  CHECK(im.series.back().avg_lambda == doctest::Approx(*im.manifest.consensus_lambda).epsilon(1e-12));
}

TEST_CASE("imitation without consensus inside the cap is recorded, not fatal") {
  RunConfig cfg = small(ImitationRule{}, 100);
  cfg.max_consensus_trades = 10;
  const RunResult r = simulate(cfg);
  CHECK_FALSE(r.manifest.consensus_lambda);
  CHECK(r.manifest.end_trade == 10 + cfg.n_trades);
  CHECK_FALSE(r.manifest.warnings.empty());
}

TEST_CASE("outputs are byte-identical across reruns") {
  const fs::path a = scratch("rerun_a");
  const fs::path b = scratch("rerun_b");
  for (const SavingsRule& rule : {SavingsRule{QuenchedUniformRule{}}, SavingsRule{ImitationRule{}}}) {
    RunConfig cfg = small(rule);
    cfg.output_dir = "out";
    RunResult ra = simulate(cfg);
    RunResult rb = simulate(cfg);
    write_outputs(ra, a);
    write_outputs(rb, b);
    for (const auto& name : ra.manifest.files) CHECK(slurp(a / name) == slurp(b / name));
    CHECK(slurp(a / "manifest.json") == slurp(b / "manifest.json"));
  }
}

TEST_CASE("written files follow the CSV and manifest contracts") {
  const fs::path dir = scratch("contracts");
  RunConfig cfg = small(ImitationRule{});
  cfg.output_dir = dir.string();
  const RunResult r = run_model(cfg);
  CHECK(r.manifest.files == std::vector<std::string>{"money_density.csv", "lambda_density.csv", "avg_lambda.csv"});

  std::istringstream density(slurp(dir / "money_density.csv"));
  std::string line;
  std::getline(density, line);
  CHECK(line == "bin_center,bin_width,density");
  std::size_t rows = 0;
  double integral = 0.0;
  while (std::getline(density, line)) {
    double center = 0, width = 0, value = 0;
    char c1 = 0, c2 = 0;
    std::istringstream row(line);
    row >> center >> c1 >> width >> c2 >> value;
    integral += width * value;
    ++rows;
  }
  CHECK(rows == cfg.binning.bins);
  CHECK(std::abs(integral - 1.0) < 1e-9);

  std::istringstream series(slurp(dir / "avg_lambda.csv"));
  std::getline(series, line);
  CHECK(line == "trade,avg_lambda");

  const auto j = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(j.at("schema_version") == kManifestSchemaVersion);
  CHECK(manifest_from_json(j) == r.manifest);
}

TEST_CASE("manifest JSON round-trips") {
  for (const SavingsRule& rule : {SavingsRule{ConstantRule{0.3}}, SavingsRule{QuenchedUniformRule{}},
                                  SavingsRule{MoneyDependentRule{LambdaForm::Decreasing, 0.9, 2}},
                                  SavingsRule{UrnRule{4, 2, 100}}, SavingsRule{ImitationRule{}}}) {
    const RunResult r = simulate(small(rule));
    const std::string text = to_json(r.manifest).dump();
    CHECK(manifest_from_json(nlohmann::json::parse(text)) == r.manifest);
  }
}

TEST_CASE("empty snapshot set writes a manifest without a density file") {
  const fs::path dir = scratch("empty");
  RunConfig cfg = RunConfig::defaults(UrnRule{2, 2, 100}, 20);
  cfg.n_trades = 0;
  cfg.burn_in = 0;
  cfg.n_snapshots = 0;
  cfg.output_dir = dir.string();
  const RunResult r = run_model(cfg);
  CHECK(fs::exists(dir / "manifest.json"));
  CHECK_FALSE(fs::exists(dir / "money_density.csv"));
  CHECK(fs::exists(dir / "lambda_density.csv"));
  CHECK_FALSE(r.manifest.warnings.empty());
}

TEST_CASE("ensembles") {
  RunConfig cfg = small(ConstantRule{0.5});

  SUBCASE("one run: pooled density equals the run's density") {
    const EnsembleResult e = run_ensemble(cfg, 1);
    REQUIRE(e.pooled_density);
    CHECK(*e.pooled_density == *e.runs[0].money_density);
  }
  SUBCASE("members use their own substreams; a forced index reproduces a member") {
    const EnsembleResult e = run_ensemble(cfg, 3);
    std::set<std::uint64_t> seeds;
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(e.runs[k].manifest.run_index == k);
      CHECK(e.runs[k].manifest.stream_seed == substream_seed(cfg.seed, k));
      seeds.insert(e.runs[k].manifest.stream_seed);
    }
    CHECK(seeds.size() == 3);
    CHECK(simulate(cfg, 2).manifest == e.runs[2].manifest);
    CHECK(simulate(cfg, 1).manifest == simulate(cfg, 1).manifest);
    CHECK(e.runs[0].money_samples != e.runs[1].money_samples);
    CHECK(std::abs(e.pooled_density->integral() - 1.0) < 1e-9);
  }
  SUBCASE("results do not depend on the worker count") {
    setenv("KINEX_WORKERS", "1", 1);
    const EnsembleResult serial = run_ensemble(cfg, 4);
    setenv("KINEX_WORKERS", "3", 1);
    const EnsembleResult parallel = run_ensemble(cfg, 4);
    unsetenv("KINEX_WORKERS");
    for (std::size_t k = 0; k < 4; ++k) CHECK(serial.runs[k].manifest == parallel.runs[k].manifest);
    CHECK(*serial.pooled_density == *parallel.pooled_density);
  }
  SUBCASE("ensemble writes run-indexed directories and a pooled density") {
    const fs::path dir = scratch("ensemble");
    cfg.output_dir = dir.string();
    run_ensemble(cfg, 2);
    CHECK(fs::exists(dir / "run_000" / "manifest.json"));
    CHECK(fs::exists(dir / "run_001" / "money_density.csv"));
    CHECK(fs::exists(dir / "pooled_density.csv"));
  }
  SUBCASE("polya a = b = 1, 20 pooled runs: frozen lambdas are uniform") {
    RunConfig p = RunConfig::defaults(UrnRule{1, 1, 10'000}, 1000);
    p.n_trades = 0;
    p.burn_in = 0;
    p.n_snapshots = 0;
    const EnsembleResult e = run_ensemble(p, 20);
    std::vector<double> lambdas;
    for (const RunResult& r : e.runs) lambdas.insert(lambdas.end(), r.final_lambdas.begin(), r.final_lambdas.end());
    CHECK(ks_statistic(lambdas, [](double x) { return beta_cdf(x, 1, 1); }) < 0.03);
  }
  CHECK_THROWS(run_ensemble(cfg, 0));
}

TEST_CASE("presets") {
  const auto fig1 = preset("fig1");
  REQUIRE(fig1.size() == 4);
  std::vector<double> lambdas;
  for (const auto& m : fig1) {
    CHECK(m.config.n_agents == 100);
    CHECK(m.config.n_trades == 1'000'000);
    lambdas.push_back(std::get<ConstantRule>(m.config.rule).lambda);
  }
  CHECK(lambdas == std::vector<double>{0.0, 0.2, 0.5, 0.8});

  std::vector<double> c2s;
  for (const auto& m : preset("fig3")) {
    const auto& r = std::get<MoneyDependentRule>(m.config.rule);
    CHECK(r.form == LambdaForm::Decreasing);
    CHECK(r.c1 == 0.95);
    c2s.push_back(r.c2);
  }
  CHECK(c2s == std::vector<double>{0.1, 0.5, 1.0, 2.0, 4.0});

  const auto fig6 = preset("fig6");
  REQUIRE(fig6.size() == 2);
  const auto& big = std::get<UrnRule>(fig6[0].config.rule);
  CHECK(big.a == 1e6);
  CHECK(big.b == 1e6);

  CHECK(preset("fig4").size() == 4);
  CHECK(preset("fig5").size() == 2);
  CHECK(preset("fig7")[0].config.model() == ModelKind::Imitation);
  CHECK(preset("fig2")[0].config.model() == ModelKind::CCM);
  for (const auto& id : preset_ids()) {
    for (const auto& m : preset(id)) CHECK_NOTHROW(validate(m.config));
  }
  CHECK_THROWS_AS(preset("fig8"), std::invalid_argument);
}
