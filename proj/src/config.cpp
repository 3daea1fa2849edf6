#include "kinex/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "kinex/errors.hpp"

namespace kinex {

namespace {

constexpr std::array<std::string_view, 24> kKeys{
    "model",          "n_agents",       "n_trades",   "burn_in",   "snapshot_every", "n_snapshots",
    "seed",           "output_dir",     "lambda",     "c1",        "c2",             "a",
    "b",              "warmup",         "max_consensus_trades",    "series_every",   "hist_scale",
    "hist_min",       "hist_max",       "hist_bins",  "hist_ratio", "tail_fraction", "smoothing_window",
    "mode_prominence",
};

// Keys that only make sense for some models.
const std::map<std::string_view, std::set<ModelKind>>& model_specific_keys() {
  static const std::map<std::string_view, std::set<ModelKind>> keys{
      {"lambda", {ModelKind::CC}},
      {"c1", {ModelKind::SelfOrgDecreasing, ModelKind::SelfOrgIncreasing}},
      {"c2", {ModelKind::SelfOrgDecreasing, ModelKind::SelfOrgIncreasing}},
      {"a", {ModelKind::Polya}},
      {"b", {ModelKind::Polya}},
      {"warmup", {ModelKind::Polya}},
      {"max_consensus_trades", {ModelKind::Imitation}},
      {"series_every", {ModelKind::Imitation}},
  };
  return keys;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::string suggestion_for(std::string_view key) {
  std::string_view best;
  std::size_t best_distance = 3;
  for (std::string_view known : kKeys) {
    const std::size_t d = edit_distance(key, known);
    if (d < best_distance) {
      best_distance = d;
      best = known;
    }
  }
  return best.empty() ? std::string{} : " (did you mean '" + std::string(best) + "'?)";
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct Entry {
  std::string value;
  std::size_t line;
};

double to_double(const std::string& key, const Entry& e) {
  double v = 0.0;
  const char* end = e.value.data() + e.value.size();
  auto [ptr, ec] = std::from_chars(e.value.data(), end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
    throw ConfigError("expected a real number for '" + key + "', got '" + e.value + "'", e.line, key);
  }
  return v;
}

// Counts accept plain integers and exact scientific forms such as 1e6.
std::uint64_t to_count(const std::string& key, const Entry& e) {
  std::uint64_t v = 0;
  const char* end = e.value.data() + e.value.size();
  auto [ptr, ec] = std::from_chars(e.value.data(), end, v);
  if (ec == std::errc{} && ptr == end) return v;
  double d = 0.0;
  auto [dptr, dec] = std::from_chars(e.value.data(), end, d);
  if (dec == std::errc{} && dptr == end && d >= 0.0 && d < 0x1.0p64 && std::floor(d) == d) {
    return static_cast<std::uint64_t>(d);
  }
  throw ConfigError("expected a nonnegative integer for '" + key + "', got '" + e.value + "'", e.line, key);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::vector<double> Binning::edges() const {
  return scale == BinScale::Linear ? linear_edges(min, max, bins) : log_edges(min, max, ratio);
}

Binning default_binning(ModelKind model, std::size_t n_agents) {
  if (model == ModelKind::CCM || model == ModelKind::Polya) {
    return Binning{BinScale::Logarithmic, 1e-3, static_cast<double>(n_agents), 100, 1.25};
  }
  return Binning{BinScale::Linear, 0.0, 5.0, 100, 1.25};
}

RunConfig RunConfig::defaults(const SavingsRule& rule, std::size_t n_agents) {
  RunConfig cfg;
  cfg.rule = rule;
  cfg.n_agents = n_agents;
  cfg.snapshot_every = n_agents;
  cfg.series_every = n_agents;
  cfg.binning = default_binning(model_of(rule), n_agents);
  return cfg;
}

ConfigError::ConfigError(const std::string& message, std::size_t line, std::string field)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
      line_(line),
      field_(std::move(field)) {}

void validate(const RunConfig& cfg) {
  try {
    validate(cfg.rule);
  } catch (const DomainError& e) {
    throw ConfigError(e.what(), 0, "model_params");
  }
  if (cfg.n_agents < 2) throw ConfigError("n_agents must be at least 2", 0, "n_agents");
  if (cfg.snapshot_every < 1) throw ConfigError("snapshot_every must be at least 1", 0, "snapshot_every");
  if (cfg.series_every < 1) throw ConfigError("series_every must be at least 1", 0, "series_every");
  const auto max = std::numeric_limits<std::uint64_t>::max();
  if (cfg.n_snapshots > 0 && cfg.snapshot_every > (max - cfg.burn_in) / cfg.n_snapshots) {
    throw ConfigError("burn_in + snapshot_every * n_snapshots overflows", 0, "n_snapshots");
  }
  if (cfg.burn_in + cfg.snapshot_every * cfg.n_snapshots > cfg.n_trades) {
    throw ConfigError("snapshot schedule exceeds the run: burn_in + snapshot_every * n_snapshots (" +
                          std::to_string(cfg.burn_in + cfg.snapshot_every * cfg.n_snapshots) + ") > n_trades (" +
                          std::to_string(cfg.n_trades) + ")",
                      0, "n_trades");
  }
  if (!(cfg.tail_fraction > 0.0 && cfg.tail_fraction <= 1.0)) {
    throw ConfigError("tail_fraction must lie in (0,1]", 0, "tail_fraction");
  }
  if (cfg.smoothing_window == 0 || cfg.smoothing_window % 2 == 0) {
    throw ConfigError("smoothing_window must be a positive odd count", 0, "smoothing_window");
  }
  if (!(cfg.mode_prominence >= 1.0)) throw ConfigError("mode_prominence must be at least 1", 0, "mode_prominence");
  const Binning& b = cfg.binning;
  if (!(b.max > b.min)) throw ConfigError("hist_max must exceed hist_min", 0, "hist_max");
  if (b.scale == BinScale::Linear && b.bins < 1) throw ConfigError("hist_bins must be at least 1", 0, "hist_bins");
  if (b.scale == BinScale::Logarithmic) {
    if (!(b.min > 0.0)) throw ConfigError("hist_min must be positive for log bins", 0, "hist_min");
    if (!(b.ratio > 1.0)) throw ConfigError("hist_ratio must exceed 1", 0, "hist_ratio");
  }
}

RunConfig parse_config(std::string_view text) {
  std::map<std::string, Entry> entries;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", line_no);
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError("missing key before '='", line_no);
    if (value.empty()) throw ConfigError("missing value for '" + key + "'", line_no, key);
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) {
      throw ConfigError("unknown key '" + key + "'" + suggestion_for(key), line_no, key);
    }
    if (entries.contains(key)) throw ConfigError("duplicate key '" + key + "'", line_no, key);
    entries.emplace(key, Entry{value, line_no});
  }

  const auto model_entry = entries.find("model");
  if (model_entry == entries.end()) throw ConfigError("missing required key 'model'", 0, "model");
  const auto model = parse_model(model_entry->second.value);
  if (!model) {
    throw ConfigError("unknown model '" + model_entry->second.value +
                          "' (expected cc, ccm, selforg_decreasing, selforg_increasing, polya or imitation)",
                      model_entry->second.line, "model");
  }
  for (const auto& [key, allowed] : model_specific_keys()) {
    const auto it = entries.find(std::string(key));
    if (it != entries.end() && !allowed.contains(*model)) {
      throw ConfigError("key '" + std::string(key) + "' does not apply to model '" +
                            std::string(to_string(*model)) + "'",
                        it->second.line, std::string(key));
    }
  }

  auto get_double = [&](const char* key, double fallback) {
    const auto it = entries.find(key);
    return it == entries.end() ? fallback : to_double(key, it->second);
  };
  auto get_count = [&](const char* key, std::uint64_t fallback) {
    const auto it = entries.find(key);
    return it == entries.end() ? fallback : to_count(key, it->second);
  };

  SavingsRule rule;
  switch (*model) {
    case ModelKind::CC: rule = ConstantRule{get_double("lambda", 0.0)}; break;
    case ModelKind::CCM: rule = QuenchedUniformRule{}; break;
    case ModelKind::SelfOrgDecreasing:
    case ModelKind::SelfOrgIncreasing:
      rule = MoneyDependentRule{*model == ModelKind::SelfOrgDecreasing ? LambdaForm::Decreasing : LambdaForm::Increasing,
                                get_double("c1", 0.95), get_double("c2", 1.0)};
      break;
    case ModelKind::Polya: rule = UrnRule{get_double("a", 1.0), get_double("b", 1.0), get_count("warmup", 10'000)}; break;
    case ModelKind::Imitation: rule = ImitationRule{}; break;
  }

  const std::uint64_t n_agents = get_count("n_agents", 100);
  RunConfig cfg = RunConfig::defaults(rule, static_cast<std::size_t>(n_agents));
  cfg.n_trades = get_count("n_trades", cfg.n_trades);
  cfg.burn_in = get_count("burn_in", cfg.burn_in);
  cfg.snapshot_every = get_count("snapshot_every", cfg.snapshot_every);
  cfg.n_snapshots = get_count("n_snapshots", cfg.n_snapshots);
  cfg.seed = get_count("seed", cfg.seed);
  cfg.max_consensus_trades = get_count("max_consensus_trades", cfg.max_consensus_trades);
  cfg.series_every = get_count("series_every", cfg.series_every);
  cfg.tail_fraction = get_double("tail_fraction", cfg.tail_fraction);
  cfg.smoothing_window = static_cast<std::size_t>(get_count("smoothing_window", cfg.smoothing_window));
  cfg.mode_prominence = get_double("mode_prominence", cfg.mode_prominence);
  if (const auto it = entries.find("output_dir"); it != entries.end()) cfg.output_dir = it->second.value;

  if (const auto it = entries.find("hist_scale"); it != entries.end()) {
    if (it->second.value == "linear") {
      cfg.binning.scale = BinScale::Linear;
    } else if (it->second.value == "log") {
      cfg.binning.scale = BinScale::Logarithmic;
    } else {
      throw ConfigError("hist_scale must be 'linear' or 'log'", it->second.line, "hist_scale");
    }
  }
  cfg.binning.min = get_double("hist_min", cfg.binning.min);
  cfg.binning.max = get_double("hist_max", cfg.binning.max);
  cfg.binning.bins = static_cast<std::size_t>(get_count("hist_bins", cfg.binning.bins));
  cfg.binning.ratio = get_double("hist_ratio", cfg.binning.ratio);

  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string to_config_text(const RunConfig& cfg) {
  std::ostringstream out;
  out << "model = " << to_string(cfg.model()) << '\n';
  if (const auto* r = std::get_if<ConstantRule>(&cfg.rule)) {
    out << "lambda = " << format_double(r->lambda) << '\n';
  } else if (const auto* r = std::get_if<MoneyDependentRule>(&cfg.rule)) {
    out << "c1 = " << format_double(r->c1) << "\nc2 = " << format_double(r->c2) << '\n';
  } else if (const auto* r = std::get_if<UrnRule>(&cfg.rule)) {
    out << "a = " << format_double(r->a) << "\nb = " << format_double(r->b) << "\nwarmup = " << r->warmup << '\n';
  } else if (std::holds_alternative<ImitationRule>(cfg.rule)) {
    out << "max_consensus_trades = " << cfg.max_consensus_trades << "\nseries_every = " << cfg.series_every << '\n';
  }
  out << "n_agents = " << cfg.n_agents << '\n'
      << "n_trades = " << cfg.n_trades << '\n'
      << "burn_in = " << cfg.burn_in << '\n'
      << "snapshot_every = " << cfg.snapshot_every << '\n'
      << "n_snapshots = " << cfg.n_snapshots << '\n'
      << "seed = " << cfg.seed << '\n'
      << "hist_scale = " << (cfg.binning.scale == BinScale::Linear ? "linear" : "log") << '\n'
      << "hist_min = " << format_double(cfg.binning.min) << '\n'
      << "hist_max = " << format_double(cfg.binning.max) << '\n'
      << "hist_bins = " << cfg.binning.bins << '\n'
      << "hist_ratio = " << format_double(cfg.binning.ratio) << '\n'
      << "tail_fraction = " << format_double(cfg.tail_fraction) << '\n'
      << "smoothing_window = " << cfg.smoothing_window << '\n'
      << "mode_prominence = " << format_double(cfg.mode_prominence) << '\n';
  if (!cfg.output_dir.empty()) out << "output_dir = " << cfg.output_dir << '\n';
  return out.str();
}

}  // namespace kinex
