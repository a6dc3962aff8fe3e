#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ccdq/bench.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void print_error(const std::string& code, const std::string& message) {
  nlohmann::ordered_json j;
  j["error"] = code;
  j["message"] = message;
  std::cerr << j.dump() << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"counterdiabatic QAOA benchmark harness for budget-constrained "
               "portfolio selection"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate", "write seeded random instance files");
  std::string gen_config;
  int gen_count = 0, gen_n = 0, gen_budget = 0;
  double gen_q = 0.0;
  std::uint64_t gen_base_seed = 0;
  std::string gen_out = "instances";
  auto* gen_config_opt = gen->add_option("--config", gen_config, "JSON or key=value spec");
  auto* gen_count_opt = gen->add_option("--count", gen_count, "instances to write");
  auto* gen_n_opt = gen->add_option("--n", gen_n, "assets per instance");
  auto* gen_budget_opt = gen->add_option("--budget", gen_budget, "selection budget");
  auto* gen_q_opt = gen->add_option("--q", gen_q, "risk aversion");
  auto* gen_seed_opt = gen->add_option("--base-seed", gen_base_seed, "seed of the first file");
  gen->add_option("--out", gen_out, "output directory");

  auto* oracle = app.add_subcommand("oracle", "exact extrema and penalty separation");
  std::string oracle_file;
  double oracle_alpha = 0.0;
  oracle->add_option("instance", oracle_file, "instance JSON file")->required();
  auto* oracle_alpha_opt =
      oracle->add_option("--penalty-alpha", oracle_alpha, "override the penalty weight");

  auto* sweep = app.add_subcommand("sweep", "run the method comparison grid");
  std::string sweep_config, sweep_out;
  std::uint64_t sweep_seed = 0;
  int sweep_jobs = 1;
  auto* sweep_config_opt =
      sweep->add_option("--config", sweep_config, "JSON or key=value spec");
  auto* sweep_seed_opt = sweep->add_option("--seed", sweep_seed, "sweep base seed");
  auto* sweep_jobs_opt = sweep->add_option("--jobs", sweep_jobs, "worker count");
  auto* sweep_out_opt = sweep->add_option("--out", sweep_out, "results CSV path");

  auto* report = app.add_subcommand("report", "pivot a results CSV into plot series");
  std::string report_csv, report_out = "report";
  report->add_option("csv", report_csv, "sweep results CSV")->required();
  report->add_option("--out", report_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    print_error("usage", e.what());
    return e.get_exit_code();
  }

  try {
    if (app.got_subcommand(gen)) {
      ccdq::GenerationSpec spec;
      if (gen_config_opt->count()) spec = ccdq::parse_generation_config(read_file(gen_config));
      if (gen_count_opt->count()) spec.count = gen_count;
      if (gen_n_opt->count()) spec.n_assets = gen_n;
      if (gen_budget_opt->count()) spec.budget = gen_budget;
      if (gen_q_opt->count()) spec.risk_aversion = gen_q;
      if (gen_seed_opt->count()) spec.base_seed = gen_base_seed;
      nlohmann::ordered_json j;
      j["written"] = ccdq::cmd_generate(spec, gen_out);
      std::cout << j.dump(2) << std::endl;
    } else if (app.got_subcommand(oracle)) {
      ccdq::PortfolioInstance inst = ccdq::load_instance(oracle_file);
      std::optional<double> alpha;
      if (oracle_alpha_opt->count()) alpha = oracle_alpha;
      std::cout << ccdq::oracle_report(inst, alpha) << std::endl;
    } else if (app.got_subcommand(sweep)) {
      ccdq::SweepSpec spec = sweep_config_opt->count()
                                 ? ccdq::parse_sweep_config(read_file(sweep_config))
                                 : ccdq::default_benchmark_spec();
      if (sweep_seed_opt->count()) spec.seed = sweep_seed;
      if (sweep_jobs_opt->count()) spec.jobs = sweep_jobs;
      if (sweep_out_opt->count()) spec.out = sweep_out;
      ccdq::SweepResult result = ccdq::run_sweep(spec);
      std::string summary = ccdq::write_sweep_outputs(spec, result);
      std::size_t errors = 0;
      for (const auto& row : result.rows)
        if (!row.ok) ++errors;
      nlohmann::ordered_json j;
      j["results"] = spec.out;
      j["summary"] = summary;
      j["rows"] = result.rows.size();
      j["errors"] = errors;
      std::cout << j.dump(2) << std::endl;
    } else if (app.got_subcommand(report)) {
      nlohmann::ordered_json j;
      j["written"] = ccdq::cmd_report(read_file(report_csv), report_out);
      std::cout << j.dump(2) << std::endl;
    }
  } catch (const std::invalid_argument& e) {
    print_error("invalid_argument", e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error("error", e.what());
    return 1;
  }
  return 0;
}
