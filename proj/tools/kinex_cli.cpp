// kinex: command line front end for the kinetic exchange simulator.
//
//   kinex run <config> [--seed S] [--out DIR] [--runs K] [--format csv|json]
//   kinex reproduce <fig1..fig7> [...same flags]
//   kinex sweep <config> --param c2 --values 1,2,3,4 [...same flags]

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kinex/config.hpp"
#include "kinex/output.hpp"
#include "kinex/presets.hpp"
#include "kinex/runner.hpp"

namespace {

struct CommonOptions {
  std::optional<std::uint64_t> seed;
  std::string out;
  std::size_t runs = 0;  // 0: preset or single-run default
  std::string format = "csv";
};

struct Job {
  std::string label;
  kinex::RunConfig config;
  std::size_t runs = 1;
};

std::string csv_field(const std::optional<double>& v) {
  if (!v) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", *v);
  return buf;
}

void print_summary(const std::vector<std::pair<std::string, kinex::RunManifest>>& rows, const std::string& format) {
  if (format == "json") {
    nlohmann::json all = nlohmann::json::array();
    for (const auto& [label, m] : rows) {
      nlohmann::json j = kinex::to_json(m);
      j["label"] = label;
      all.push_back(std::move(j));
    }
    std::cout << all.dump(2) << '\n';
    return;
  }
  std::cout << "label,run,model,end_trade,conservation_ok,tail_exponent,mode_count,gamma_shape,consensus_lambda,"
               "consensus_trade\n";
  for (const auto& [label, m] : rows) {
    std::cout << label << ',' << m.run_index << ',' << kinex::to_string(m.config.model()) << ',' << m.end_trade << ','
              << (m.conservation_ok ? "true" : "false") << ','
              << csv_field(m.tail_fit ? std::optional(m.tail_fit->density_exponent) : std::nullopt) << ','
              << (m.mode_count ? std::to_string(*m.mode_count) : "") << ','
              << csv_field(m.gamma_fit ? std::optional(m.gamma_fit->shape) : std::nullopt) << ','
              << csv_field(m.consensus_lambda) << ','
              << (m.consensus_trade ? std::to_string(*m.consensus_trade) : "") << '\n';
  }
}

int execute(std::vector<Job> jobs, const CommonOptions& opts) {
  std::vector<std::pair<std::string, kinex::RunManifest>> rows;
  bool ok = true;
  for (Job& job : jobs) {
    if (opts.seed) job.config.seed = *opts.seed;
    if (!opts.out.empty()) {
      job.config.output_dir =
          jobs.size() == 1 ? opts.out : (std::filesystem::path(opts.out) / job.label).string();
    }
    const std::size_t runs = opts.runs > 0 ? opts.runs : job.runs;
    if (runs == 1) {
      kinex::RunResult r = kinex::run_model(job.config);
      rows.emplace_back(job.label, r.manifest);
    } else {
      kinex::EnsembleResult e = kinex::run_ensemble(job.config, runs);
      for (const auto& r : e.runs) rows.emplace_back(job.label, r.manifest);
    }
  }
  for (const auto& [label, m] : rows) ok = ok && m.conservation_ok;
  print_summary(rows, opts.format);
  return ok ? 0 : 1;
}

void apply_param(kinex::RunConfig& cfg, const std::string& name, double value) {
  bool applied = false;
  if (auto* r = std::get_if<kinex::ConstantRule>(&cfg.rule); r && name == "lambda") {
    r->lambda = value;
    applied = true;
  } else if (auto* r = std::get_if<kinex::MoneyDependentRule>(&cfg.rule); r && (name == "c1" || name == "c2")) {
    (name == "c1" ? r->c1 : r->c2) = value;
    applied = true;
  } else if (auto* r = std::get_if<kinex::UrnRule>(&cfg.rule); r && (name == "a" || name == "b")) {
    (name == "a" ? r->a : r->b) = value;
    applied = true;
  }
  if (!applied) {
    throw kinex::ConfigError("parameter '" + name + "' cannot be swept for model '" +
                                 std::string(kinex::to_string(cfg.model())) + "'",
                             0, name);
  }
  kinex::validate(cfg);
}

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--seed", opts.seed, "Master seed (overrides the config)");
  cmd->add_option("--out", opts.out, "Output directory");
  cmd->add_option("--runs", opts.runs, "Ensemble size; run k uses substream (seed, k)")->check(CLI::PositiveNumber);
  cmd->add_option("--format", opts.format, "Summary format on stdout")->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kinetic exchange models of money with savings"};
  app.require_subcommand(1);

  CommonOptions opts;
  std::string config_path;
  std::string figure;
  std::string param;
  std::vector<double> values;

  auto* run = app.add_subcommand("run", "Run one config file");
  run->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  add_common(run, opts);

  auto* reproduce = app.add_subcommand("reproduce", "Run a figure preset");
  reproduce->add_option("figure_id", figure, "fig1 ... fig7")->required()->check(CLI::IsMember(kinex::preset_ids()));
  add_common(reproduce, opts);

  auto* sweep = app.add_subcommand("sweep", "Run a config over a grid of one model parameter");
  sweep->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--param", param, "Parameter name (lambda, c1, c2, a, b)")->required();
  sweep->add_option("--values", values, "Comma-separated values")->required()->delimiter(',');
  add_common(sweep, opts);

  CLI11_PARSE(app, argc, argv);

  try {
    std::vector<Job> jobs;
    if (*run) {
      jobs.push_back({std::filesystem::path(config_path).stem().string(), kinex::load_config(config_path), 1});
    } else if (*reproduce) {
      for (auto& member : kinex::preset(figure)) jobs.push_back({member.label, member.config, member.runs});
      if (opts.out.empty()) opts.out = (std::filesystem::path("out") / figure).string();
    } else {
      const kinex::RunConfig base = kinex::load_config(config_path);
      for (double v : values) {
        kinex::RunConfig cfg = base;
        apply_param(cfg, param, v);
        std::ostringstream label;
        label << param << '_' << v;
        jobs.push_back({label.str(), cfg, 1});
      }
      if (jobs.size() == 1 && !opts.out.empty()) opts.out = (std::filesystem::path(opts.out) / jobs[0].label).string();
    }
    return execute(std::move(jobs), opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
