#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ccdq/portfolio.hpp"
#include "ccdq/qaoa.hpp"

namespace ccdq {

// Seeded batch of random instances; file i uses seed base_seed + i.
struct GenerationSpec {
  int count = 10;
  int n_assets = 12;
  int budget = 4;
  double risk_aversion = 0.5;
  std::uint64_t base_seed = 100;
};

// Cross product of instances x methods x depths x alphas; methods with a
// mixer graph (xy, xy_cd) additionally fan out over `topologies`, the rest
// run once per cell with topology "-". Instances come from instance_files
// when nonempty, otherwise from `generation` (ids s<seed>).
struct SweepSpec {
  std::vector<std::string> instance_files;
  GenerationSpec generation;
  std::vector<Method> methods = {Method::xy, Method::xy_cd, Method::grover,
                                 Method::penalty};
  std::vector<int> depths = {1, 2, 3};
  std::vector<double> cvar_alphas = {0.1, 0.25, 1.0};
  std::vector<Topology> topologies = {Topology::ring};
  int restarts = 3;
  std::optional<std::uint64_t> max_evals;  // per run; empty keeps the
                                           // 200-per-parameter default
  std::optional<CdMode> cd_mode;
  std::optional<double> penalty_alpha;
  InitStrategy init_strategy = InitStrategy::agp_seeded;
  int max_pool_weight = 3;
  std::uint64_t seed = 0;  // folded with run coordinates into per-run seeds
  int jobs = 1;
  std::string out = "results.csv";
};

// 10 instances at n=12, B=4, q=0.5, all four methods, p in {1,2,3},
// alphas {0.1, 0.25, 1.0}, ring topology.
SweepSpec default_benchmark_spec();

struct SweepRow {
  std::string instance_id;
  Method method = Method::xy;
  std::string topology;  // "-" when the method has no mixer graph
  int depth = 0;
  double cvar_alpha = 0.0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;  // nonempty when the run failed; other fields stay empty
  StateMetrics metrics;
  double best_cvar = 0.0;
  CostReport cost;
  std::uint64_t evals_used = 0;
  double wall_ms = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // cross-product order, stable across jobs
  std::string csv;             // one row per run, kResultsHeader schema
  std::string summary_csv;     // per (method, topology, p, alpha) aggregates
};

inline constexpr const char* kResultsHeader =
    "instance_id,method,topology,p,cvar_alpha,seed,r,p_gs,feasible_mass,"
    "best_cvar,cnot_count,two_qubit_count,depth_model,evals_used,wall_ms,"
    "r_flag,error";

inline constexpr const char* kSummaryHeader =
    "method,topology,p,cvar_alpha,runs,errors,r_mean,r_std,p_gs_mean,"
    "p_gs_std,feasible_mass_mean,best_cvar_mean,best_cvar_std,"
    "cnot_count_mean,two_qubit_count_mean,depth_model_mean,evals_used_mean";

// Runs every cell (failures become error rows, the sweep continues) and
// assembles both tables in memory. Workers are bounded by spec.jobs; row
// order and content are independent of the worker count, wall_ms aside.
SweepResult run_sweep(const SweepSpec& spec);

// Writes result.csv to spec.out and the summary to <stem>_summary.csv next
// to it, creating parent directories. Returns the summary path.
std::string write_sweep_outputs(const SweepSpec& spec, const SweepResult& result);

// Writes instance_s<seed>.json files under out_dir; byte-stable across
// re-runs with the same spec. Returns the written paths in seed order.
std::vector<std::string> cmd_generate(const GenerationSpec& spec,
                                      const std::string& out_dir);

// Exact feasible extrema plus the penalty separation margin (smallest
// penalized infeasible energy minus E_min; positive means the penalty
// dominates every constraint violation). alpha falls back to
// default_penalty_alpha. JSON text, keys in fixed order.
std::string oracle_report(const PortfolioInstance& inst,
                          std::optional<double> penalty_alpha = std::nullopt);

// Pivots a results table into plot-ready series files under out_dir:
// approximation-ratio-vs-depth per alpha (ratio_alpha_<a>.csv/.txt) and
// gate-counts-vs-depth (counts.csv/.txt). Error rows are skipped; a
// header-only input yields header-only outputs. Returns written paths.
std::vector<std::string> cmd_report(const std::string& csv_text,
                                    const std::string& out_dir);

// Accepts a JSON object or key=value lines (# comments). Unknown keys throw.
SweepSpec parse_sweep_config(const std::string& text);
GenerationSpec parse_generation_config(const std::string& text);

// Deterministic %.12g rendering shared by every emitted table.
std::string format_double(double v);

// Splits one CSV line; fields never contain commas (error text is
// sanitized on the way in).
std::vector<std::string> split_csv_line(const std::string& line);

// Drops one named column from a header-led CSV (determinism comparisons
// exclude wall_ms). Unknown column throws.
std::string strip_csv_column(const std::string& csv, const std::string& column);

}  // namespace ccdq
