#include "kinex/output.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace kinex {

using nlohmann::json;

namespace {

json model_params(const SavingsRule& rule) {
  if (const auto* r = std::get_if<ConstantRule>(&rule)) return {{"lambda", r->lambda}};
  if (const auto* r = std::get_if<MoneyDependentRule>(&rule)) return {{"c1", r->c1}, {"c2", r->c2}};
  if (const auto* r = std::get_if<UrnRule>(&rule)) return {{"a", r->a}, {"b", r->b}, {"warmup", r->warmup}};
  return json::object();
}

SavingsRule rule_from_json(ModelKind model, const json& p) {
  switch (model) {
    case ModelKind::CC: return ConstantRule{p.at("lambda").get<double>()};
    case ModelKind::CCM: return QuenchedUniformRule{};
    case ModelKind::SelfOrgDecreasing:
      return MoneyDependentRule{LambdaForm::Decreasing, p.at("c1").get<double>(), p.at("c2").get<double>()};
    case ModelKind::SelfOrgIncreasing:
      return MoneyDependentRule{LambdaForm::Increasing, p.at("c1").get<double>(), p.at("c2").get<double>()};
    case ModelKind::Polya:
      return UrnRule{p.at("a").get<double>(), p.at("b").get<double>(), p.at("warmup").get<std::uint64_t>()};
    case ModelKind::Imitation: return ImitationRule{};
  }
  throw std::invalid_argument("unknown model");
}

std::string format_row(double a, double b, double c) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", a, b, c);
  return buf;
}

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> optional_from(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

}  // namespace

json to_json(const RunConfig& cfg) {
  return {
      {"model", std::string(to_string(cfg.model()))},
      {"model_params", model_params(cfg.rule)},
      {"n_agents", cfg.n_agents},
      {"n_trades", cfg.n_trades},
      {"burn_in", cfg.burn_in},
      {"snapshot_every", cfg.snapshot_every},
      {"n_snapshots", cfg.n_snapshots},
      {"seed", cfg.seed},
      {"max_consensus_trades", cfg.max_consensus_trades},
      {"series_every", cfg.series_every},
      {"binning",
       {{"scale", cfg.binning.scale == BinScale::Linear ? "linear" : "log"},
        {"min", cfg.binning.min},
        {"max", cfg.binning.max},
        {"bins", cfg.binning.bins},
        {"ratio", cfg.binning.ratio}}},
      {"tail_fraction", cfg.tail_fraction},
      {"smoothing_window", cfg.smoothing_window},
      {"mode_prominence", cfg.mode_prominence},
      {"output_dir", cfg.output_dir},
  };
}

RunConfig config_from_json(const json& j) {
  const auto model = parse_model(j.at("model").get<std::string>());
  if (!model) throw std::invalid_argument("manifest: unknown model " + j.at("model").dump());
  RunConfig cfg;
  cfg.rule = rule_from_json(*model, j.at("model_params"));
  cfg.n_agents = j.at("n_agents").get<std::size_t>();
  cfg.n_trades = j.at("n_trades").get<std::uint64_t>();
  cfg.burn_in = j.at("burn_in").get<std::uint64_t>();
  cfg.snapshot_every = j.at("snapshot_every").get<std::uint64_t>();
  cfg.n_snapshots = j.at("n_snapshots").get<std::uint64_t>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  cfg.max_consensus_trades = j.at("max_consensus_trades").get<std::uint64_t>();
  cfg.series_every = j.at("series_every").get<std::uint64_t>();
  const json& b = j.at("binning");
  cfg.binning.scale = b.at("scale").get<std::string>() == "linear" ? BinScale::Linear : BinScale::Logarithmic;
  cfg.binning.min = b.at("min").get<double>();
  cfg.binning.max = b.at("max").get<double>();
  cfg.binning.bins = b.at("bins").get<std::size_t>();
  cfg.binning.ratio = b.at("ratio").get<double>();
  cfg.tail_fraction = j.at("tail_fraction").get<double>();
  cfg.smoothing_window = j.at("smoothing_window").get<std::size_t>();
  cfg.mode_prominence = j.at("mode_prominence").get<double>();
  cfg.output_dir = j.at("output_dir").get<std::string>();
  return cfg;
}

json to_json(const RunManifest& m) {
  json tail = nullptr;
  if (m.tail_fit) {
    tail = {{"density_exponent", m.tail_fit->density_exponent},
            {"xmin", m.tail_fit->xmin},
            {"n_tail", m.tail_fit->n_tail},
            {"stderr", m.tail_fit->standard_error}};
  }
  json gamma = nullptr;
  if (m.gamma_fit) gamma = {{"shape", m.gamma_fit->shape}, {"scale", m.gamma_fit->scale}};

  return {
      {"schema_version", m.schema_version},
      {"artifact_version", m.artifact_version},
      {"config", to_json(m.config)},
      {"run_index", m.run_index},
      {"stream_seed", m.stream_seed},
      {"start_trade", m.start_trade},
      {"end_trade", m.end_trade},
      {"total_money_initial", m.total_money_initial},
      {"total_money_final", m.total_money_final},
      {"conservation_ok", m.conservation_ok},
      {"n_snapshot_samples", m.n_snapshot_samples},
      {"statistics",
       {{"tail_fit", tail},
        {"mode_count", optional_json(m.mode_count)},
        {"gamma_fit", gamma},
        {"consensus_lambda", optional_json(m.consensus_lambda)},
        {"consensus_trade", optional_json(m.consensus_trade)}}},
      {"files", m.files},
      {"warnings", m.warnings},
  };
}

RunManifest manifest_from_json(const json& j) {
  RunManifest m;
  m.schema_version = j.at("schema_version").get<int>();
  if (m.schema_version != kManifestSchemaVersion) {
    throw std::invalid_argument("manifest: unsupported schema_version " + std::to_string(m.schema_version));
  }
  m.artifact_version = j.at("artifact_version").get<std::string>();
  m.config = config_from_json(j.at("config"));
  m.run_index = j.at("run_index").get<std::uint64_t>();
  m.stream_seed = j.at("stream_seed").get<std::uint64_t>();
  m.start_trade = j.at("start_trade").get<std::uint64_t>();
  m.end_trade = j.at("end_trade").get<std::uint64_t>();
  m.total_money_initial = j.at("total_money_initial").get<double>();
  m.total_money_final = j.at("total_money_final").get<double>();
  m.conservation_ok = j.at("conservation_ok").get<bool>();
  m.n_snapshot_samples = j.at("n_snapshot_samples").get<std::uint64_t>();

  const json& s = j.at("statistics");
  if (!s.at("tail_fit").is_null()) {
    const json& t = s.at("tail_fit");
    m.tail_fit = TailFit{t.at("density_exponent").get<double>(), t.at("xmin").get<double>(),
                         t.at("n_tail").get<std::size_t>(), t.at("stderr").get<double>()};
  }
  m.mode_count = optional_from<std::size_t>(s, "mode_count");
  if (!s.at("gamma_fit").is_null()) {
    m.gamma_fit = GammaFit{s.at("gamma_fit").at("shape").get<double>(), s.at("gamma_fit").at("scale").get<double>()};
  }
  m.consensus_lambda = optional_from<double>(s, "consensus_lambda");
  m.consensus_trade = optional_from<std::uint64_t>(s, "consensus_trade");
  m.files = j.at("files").get<std::vector<std::string>>();
  m.warnings = j.at("warnings").get<std::vector<std::string>>();
  return m;
}

std::string density_csv(const DensityEstimate& d) {
  std::string out = "bin_center,bin_width,density\n";
  for (std::size_t k = 0; k < d.bins(); ++k) out += format_row(d.center(k), d.width(k), d.density[k]);
  return out;
}

std::string series_csv(std::span<const SeriesPoint> series) {
  std::string out = "trade,avg_lambda\n";
  char buf[64];
  for (const SeriesPoint& p : series) {
    std::snprintf(buf, sizeof buf, "%llu,%.17g\n", static_cast<unsigned long long>(p.trade), p.avg_lambda);
    out += buf;
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << contents;
  out.close();
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

void write_outputs(RunResult& result, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir.string() + "': " + ec.message());

  RunManifest& m = result.manifest;
  m.files.clear();
  if (result.money_density) {
    write_text_file(dir / "money_density.csv", density_csv(*result.money_density));
    m.files.emplace_back("money_density.csv");
  }
  if (result.lambda_density) {
    write_text_file(dir / "lambda_density.csv", density_csv(*result.lambda_density));
    m.files.emplace_back("lambda_density.csv");
  }
  if (!result.series.empty()) {
    write_text_file(dir / "avg_lambda.csv", series_csv(result.series));
    m.files.emplace_back("avg_lambda.csv");
  }
  write_text_file(dir / "manifest.json", to_json(m).dump(2) + "\n");
}

}  // namespace kinex
