#include "ccdq/bench.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "ccdq/rng.hpp"

namespace ccdq {

namespace {

namespace fs = std::filesystem;

bool uses_topology(Method m) { return m == Method::xy || m == Method::xy_cd; }

std::string sanitize_error(const std::string& what) {
  std::string out = what;
  for (char& c : out)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return out;
}

std::string bitstring_of(std::uint64_t x, int n) {
  std::string s(static_cast<std::size_t>(n), '0');
  for (int i = 0; i < n; ++i)
    if ((x >> i) & 1ull) s[static_cast<std::size_t>(i)] = '1';
  return s;
}

struct RunKey {
  std::size_t instance_index = 0;
  Method method = Method::xy;
  bool has_topology = false;
  Topology topology = Topology::ring;
  int depth = 0;
  double cvar_alpha = 0.0;
  std::uint64_t seed = 0;
};

std::uint64_t run_seed(std::uint64_t base, std::size_t inst_idx, Method m, int depth,
                       std::size_t alpha_idx, std::size_t topo_idx) {
  std::uint64_t s = mix_seed(base, 0xb7e151628aed2a6bull);
  s = mix_seed(s, static_cast<std::uint64_t>(inst_idx));
  s = mix_seed(s, static_cast<std::uint64_t>(m));
  s = mix_seed(s, static_cast<std::uint64_t>(depth));
  s = mix_seed(s, static_cast<std::uint64_t>(alpha_idx));
  s = mix_seed(s, static_cast<std::uint64_t>(topo_idx));
  return s;
}

std::string file_stem(const std::string& path) { return fs::path(path).stem().string(); }

std::vector<std::pair<std::string, PortfolioInstance>> resolve_instances(
    const SweepSpec& spec) {
  std::vector<std::pair<std::string, PortfolioInstance>> out;
  if (!spec.instance_files.empty()) {
    for (const std::string& path : spec.instance_files)
      out.emplace_back(file_stem(path), load_instance(path));
    return out;
  }
  const GenerationSpec& g = spec.generation;
  if (g.count < 1) throw std::invalid_argument("generation count must be positive");
  for (int i = 0; i < g.count; ++i) {
    std::uint64_t seed = g.base_seed + static_cast<std::uint64_t>(i);
    out.emplace_back("s" + std::to_string(seed),
                     random_instance(seed, g.n_assets, g.budget, g.risk_aversion));
  }
  return out;
}

SweepRow execute_run(const SweepSpec& spec, const PortfolioInstance& inst,
                     const std::string& instance_id, const RunKey& key) {
  SweepRow row;
  row.instance_id = instance_id;
  row.method = key.method;
  row.topology = key.has_topology ? to_string(key.topology) : "-";
  row.depth = key.depth;
  row.cvar_alpha = key.cvar_alpha;
  row.seed = key.seed;
  try {
    AnsatzConfig cfg;
    cfg.method = key.method;
    cfg.depth = key.depth;
    if (key.has_topology) cfg.topology = key.topology;
    cfg.cvar_alpha = key.cvar_alpha;
    if (key.method == Method::xy_cd) cfg.cd_mode = spec.cd_mode;
    if (key.method == Method::penalty) cfg.penalty_alpha = spec.penalty_alpha;
    cfg.init_strategy = spec.init_strategy;
    cfg.max_evals = spec.max_evals;
    cfg.restarts = spec.restarts;
    cfg.seed = key.seed;
    cfg.max_pool_weight = spec.max_pool_weight;
    GateProgram program = build_ansatz(cfg, inst);
    RunResult res = optimize(program, cfg);
    row.ok = true;
    row.metrics = res.metrics;
    row.best_cvar = res.best_cvar;
    row.cost = res.cost;
    row.evals_used = res.evals_used;
    row.wall_ms = res.wall_ms;
  } catch (const std::exception& e) {
    row.ok = false;
    row.error = sanitize_error(e.what());
  }
  return row;
}

void append_row_csv(std::string& out, const SweepRow& row) {
  out += row.instance_id;
  out += ',';
  out += to_string(row.method);
  out += ',';
  out += row.topology;
  out += ',';
  out += std::to_string(row.depth);
  out += ',';
  out += format_double(row.cvar_alpha);
  out += ',';
  out += std::to_string(row.seed);
  out += ',';
  if (row.ok) {
    out += format_double(row.metrics.r);
    out += ',';
    out += format_double(row.metrics.ground_state_probability);
    out += ',';
    out += format_double(row.metrics.feasible_mass);
    out += ',';
    out += format_double(row.best_cvar);
    out += ',';
    out += std::to_string(row.cost.cnot_count);
    out += ',';
    out += std::to_string(row.cost.two_qubit_gate_count);
    out += ',';
    out += std::to_string(row.cost.depth);
    out += ',';
    out += std::to_string(row.evals_used);
    out += ',';
    out += format_double(row.wall_ms);
    out += ',';
    out += row.metrics.r_in_range ? "ok" : "unclamped";
    out += ',';
  } else {
    out += ",,,,,,,,,-,";
    out += row.error;
  }
  out += '\n';
}

struct CellAggregate {
  std::uint64_t runs = 0;
  std::uint64_t errors = 0;
  double r_sum = 0.0, r_sq = 0.0;
  double pgs_sum = 0.0, pgs_sq = 0.0;
  double feas_sum = 0.0;
  double cvar_sum = 0.0, cvar_sq = 0.0;
  double cnot_sum = 0.0, twoq_sum = 0.0, depth_sum = 0.0, evals_sum = 0.0;
};

double sample_std(double sum, double sq, std::uint64_t n) {
  if (n < 2) return 0.0;
  double mean = sum / static_cast<double>(n);
  double var = (sq - static_cast<double>(n) * mean * mean) / static_cast<double>(n - 1);
  return var > 0.0 ? std::sqrt(var) : 0.0;
}

std::string build_summary(const std::vector<SweepRow>& rows) {
  using Key = std::tuple<int, std::string, int, double>;
  std::map<Key, CellAggregate> cells;
  for (const SweepRow& row : rows) {
    Key key{static_cast<int>(row.method), row.topology, row.depth, row.cvar_alpha};
    CellAggregate& cell = cells[key];
    if (!row.ok) {
      ++cell.errors;
      continue;
    }
    ++cell.runs;
    cell.r_sum += row.metrics.r;
    cell.r_sq += row.metrics.r * row.metrics.r;
    cell.pgs_sum += row.metrics.ground_state_probability;
    cell.pgs_sq += row.metrics.ground_state_probability *
                   row.metrics.ground_state_probability;
    cell.feas_sum += row.metrics.feasible_mass;
    cell.cvar_sum += row.best_cvar;
    cell.cvar_sq += row.best_cvar * row.best_cvar;
    cell.cnot_sum += static_cast<double>(row.cost.cnot_count);
    cell.twoq_sum += static_cast<double>(row.cost.two_qubit_gate_count);
    cell.depth_sum += static_cast<double>(row.cost.depth);
    cell.evals_sum += static_cast<double>(row.evals_used);
  }

  std::string out = kSummaryHeader;
  out += '\n';
  for (const auto& [key, cell] : cells) {
    const auto& [method_int, topology, depth, alpha] = key;
    out += to_string(static_cast<Method>(method_int));
    out += ',';
    out += topology;
    out += ',';
    out += std::to_string(depth);
    out += ',';
    out += format_double(alpha);
    out += ',';
    out += std::to_string(cell.runs);
    out += ',';
    out += std::to_string(cell.errors);
    out += ',';
    if (cell.runs == 0) {
      out += ",,,,,,,,,,";
    } else {
      double n = static_cast<double>(cell.runs);
      out += format_double(cell.r_sum / n);
      out += ',';
      out += format_double(sample_std(cell.r_sum, cell.r_sq, cell.runs));
      out += ',';
      out += format_double(cell.pgs_sum / n);
      out += ',';
      out += format_double(sample_std(cell.pgs_sum, cell.pgs_sq, cell.runs));
      out += ',';
      out += format_double(cell.feas_sum / n);
      out += ',';
      out += format_double(cell.cvar_sum / n);
      out += ',';
      out += format_double(sample_std(cell.cvar_sum, cell.cvar_sq, cell.runs));
      out += ',';
      out += format_double(cell.cnot_sum / n);
      out += ',';
      out += format_double(cell.twoq_sum / n);
      out += ',';
      out += format_double(cell.depth_sum / n);
      out += ',';
      out += format_double(cell.evals_sum / n);
    }
    out += '\n';
  }
  return out;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    std::string t = trim(item);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad integer for config key '" + key + "': " + value);
  }
}

std::uint64_t parse_nonneg(const std::string& key, const std::string& value) {
  long long v = parse_int(key, value);
  if (v < 0)
    throw std::invalid_argument("config key '" + key + "' must be nonnegative");
  return static_cast<std::uint64_t>(v);
}

double parse_real(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad number for config key '" + key + "': " + value);
  }
}

// Uniform view of both config syntaxes: every key maps to the list of its
// string values (JSON arrays elementwise, scalars as one entry).
using ConfigItems = std::vector<std::pair<std::string, std::vector<std::string>>>;

std::string json_scalar_to_string(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
  if (v.is_number_float()) return format_double(v.get<double>());
  throw std::invalid_argument("unsupported JSON value: " + v.dump());
}

ConfigItems config_items(const std::string& text) {
  ConfigItems items;
  std::string body = trim(text);
  if (!body.empty() && body.front() == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config JSON must be an object");
    for (const auto& [key, value] : j.items()) {
      std::vector<std::string> values;
      if (value.is_array()) {
        for (const auto& el : value) values.push_back(json_scalar_to_string(el));
      } else {
        values.push_back(json_scalar_to_string(value));
      }
      items.emplace_back(key, std::move(values));
    }
    return items;
  }
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line is not key=value: " + t);
    items.emplace_back(trim(t.substr(0, eq)), split_list(t.substr(eq + 1)));
  }
  return items;
}

std::string single_value(const std::string& key, const std::vector<std::string>& values) {
  if (values.size() != 1)
    throw std::invalid_argument("config key '" + key + "' expects one value");
  return values.front();
}

bool apply_generation_key(GenerationSpec& g, const std::string& key,
                          const std::vector<std::string>& values) {
  if (key == "count") {
    g.count = static_cast<int>(parse_int(key, single_value(key, values)));
  } else if (key == "n" || key == "n_assets") {
    g.n_assets = static_cast<int>(parse_int(key, single_value(key, values)));
  } else if (key == "budget") {
    g.budget = static_cast<int>(parse_int(key, single_value(key, values)));
  } else if (key == "q" || key == "risk_aversion") {
    g.risk_aversion = parse_real(key, single_value(key, values));
  } else if (key == "base_seed") {
    g.base_seed = parse_nonneg(key, single_value(key, values));
  } else {
    return false;
  }
  return true;
}

}  // namespace

SweepSpec default_benchmark_spec() { return SweepSpec{}; }

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string strip_csv_column(const std::string& csv, const std::string& column) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty CSV");
  std::vector<std::string> header = split_csv_line(line);
  auto it = std::find(header.begin(), header.end(), column);
  if (it == header.end())
    throw std::invalid_argument("CSV has no column named '" + column + "'");
  std::size_t drop = static_cast<std::size_t>(it - header.begin());

  std::string out;
  auto emit = [&](const std::vector<std::string>& fields) {
    bool first = true;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i == drop) continue;
      if (!first) out += ',';
      out += fields[i];
      first = false;
    }
    out += '\n';
  };
  emit(header);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    emit(split_csv_line(line));
  }
  return out;
}

SweepResult run_sweep(const SweepSpec& spec) {
  if (spec.methods.empty()) throw std::invalid_argument("sweep needs at least one method");
  if (spec.depths.empty()) throw std::invalid_argument("sweep needs at least one depth");
  if (spec.cvar_alphas.empty())
    throw std::invalid_argument("sweep needs at least one cvar alpha");
  if (spec.jobs < 1) throw std::invalid_argument("jobs must be positive");
  bool any_topology = std::any_of(spec.methods.begin(), spec.methods.end(), uses_topology);
  if (any_topology && spec.topologies.empty())
    throw std::invalid_argument("sweep with mixer-graph methods needs a topology");

  auto instances = resolve_instances(spec);
  if (instances.empty()) throw std::invalid_argument("sweep needs at least one instance");

  std::vector<RunKey> keys;
  for (std::size_t ii = 0; ii < instances.size(); ++ii)
    for (Method m : spec.methods)
      for (int depth : spec.depths)
        for (std::size_t ai = 0; ai < spec.cvar_alphas.size(); ++ai) {
          if (uses_topology(m)) {
            for (std::size_t ti = 0; ti < spec.topologies.size(); ++ti) {
              RunKey key{ii, m, true, spec.topologies[ti], depth, spec.cvar_alphas[ai],
                         run_seed(spec.seed, ii, m, depth, ai, ti)};
              keys.push_back(key);
            }
          } else {
            RunKey key{ii, m, false, Topology::ring, depth, spec.cvar_alphas[ai],
                       run_seed(spec.seed, ii, m, depth, ai, 0)};
            keys.push_back(key);
          }
        }

  SweepResult result;
  result.rows.resize(keys.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next.fetch_add(1); i < keys.size(); i = next.fetch_add(1)) {
      const RunKey& key = keys[i];
      const auto& [id, inst] = instances[key.instance_index];
      result.rows[i] = execute_run(spec, inst, id, key);
    }
  };
  std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(spec.jobs), keys.size());
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
  }

  result.csv = kResultsHeader;
  result.csv += '\n';
  for (const SweepRow& row : result.rows) append_row_csv(result.csv, row);
  result.summary_csv = build_summary(result.rows);
  return result;
}

std::string write_sweep_outputs(const SweepSpec& spec, const SweepResult& result) {
  fs::path out(spec.out);
  if (!out.parent_path().empty()) fs::create_directories(out.parent_path());
  {
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot write " + out.string());
    f << result.csv;
  }
  fs::path summary = out.parent_path() / (out.stem().string() + "_summary.csv");
  std::ofstream f(summary);
  if (!f) throw std::runtime_error("cannot write " + summary.string());
  f << result.summary_csv;
  return summary.string();
}

std::vector<std::string> cmd_generate(const GenerationSpec& spec,
                                      const std::string& out_dir) {
  if (spec.count < 1) throw std::invalid_argument("generation count must be positive");
  fs::create_directories(out_dir);
  std::vector<std::string> paths;
  for (int i = 0; i < spec.count; ++i) {
    std::uint64_t seed = spec.base_seed + static_cast<std::uint64_t>(i);
    PortfolioInstance inst =
        random_instance(seed, spec.n_assets, spec.budget, spec.risk_aversion);
    fs::path path = fs::path(out_dir) / ("instance_s" + std::to_string(seed) + ".json");
    save_instance(inst, path.string());
    paths.push_back(path.string());
  }
  return paths;
}

std::string oracle_report(const PortfolioInstance& inst,
                          std::optional<double> penalty_alpha) {
  inst.validate();
  if (inst.n_assets >= 64 || (1ull << inst.n_assets) > kEnumerationGuard)
    throw std::runtime_error("enumeration guard: 2^" + std::to_string(inst.n_assets) +
                             " states exceed the exact-scan limit");
  IsingModel ising = to_ising(inst);
  Extrema ex = exact_extrema(ising, inst.n_assets, inst.budget);
  double alpha = penalty_alpha.value_or(default_penalty_alpha(inst));
  IsingModel penalized = to_penalty_ising(inst, alpha);

  // Smallest penalized energy over every infeasible configuration; the
  // margin over E_min certifies that no violation can undercut the
  // constrained optimum.
  std::uint64_t dim = 1ull << inst.n_assets;
  double min_infeasible = 0.0;
  bool seen = false;
  for (std::uint64_t x = 0; x < dim; ++x) {
    if (std::popcount(x) == inst.budget) continue;
    double e = cost_of_bitstring(penalized, x);
    if (!seen || e < min_infeasible) {
      min_infeasible = e;
      seen = true;
    }
  }

  nlohmann::ordered_json j;
  j["n_assets"] = inst.n_assets;
  j["budget"] = inst.budget;
  j["states_scanned"] = binomial(inst.n_assets, inst.budget);
  j["e_min"] = ex.e_min;
  j["e_max"] = ex.e_max;
  j["argmin"] = bitstring_of(ex.argmin, inst.n_assets);
  j["argmin_energy"] = cost_of_bitstring(ising, ex.argmin);
  j["degenerate"] = (ex.e_max - ex.e_min) < 1e-12;
  j["penalty_alpha"] = alpha;
  j["penalty_min_infeasible"] = min_infeasible;
  j["penalty_gap"] = min_infeasible - ex.e_min;
  j["penalty_separates"] = min_infeasible > ex.e_min;
  return j.dump(2);
}

std::vector<std::string> cmd_report(const std::string& csv_text,
                                    const std::string& out_dir) {
  std::istringstream in(csv_text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("report input is empty");
  if (line == std::string(kResultsHeader) + "\r") line.pop_back();
  if (line != kResultsHeader)
    throw std::runtime_error("report input does not match the results schema");

  struct Series {
    std::uint64_t runs = 0;
    double r_sum = 0.0, r_sq = 0.0;
    double cnot_sum = 0.0, twoq_sum = 0.0, depth_sum = 0.0;
  };
  // (method, topology, p) keyed, grouped per alpha for the ratio series and
  // pooled across alphas for the cost series (counts never depend on alpha).
  using GroupKey = std::tuple<std::string, std::string, int>;
  std::map<double, std::map<GroupKey, Series>> ratio;
  std::map<GroupKey, Series> counts;

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f = split_csv_line(line);
    if (f.size() != split_csv_line(kResultsHeader).size())
      throw std::runtime_error("malformed results row at line " + std::to_string(line_no));
    if (!f[16].empty()) continue;  // failed run
    try {
      GroupKey key{f[1], f[2], static_cast<int>(parse_int("p", f[3]))};
      double alpha = parse_real("cvar_alpha", f[4]);
      double r = parse_real("r", f[6]);
      Series& s = ratio[alpha][key];
      ++s.runs;
      s.r_sum += r;
      s.r_sq += r * r;
      Series& c = counts[key];
      ++c.runs;
      c.cnot_sum += parse_real("cnot_count", f[10]);
      c.twoq_sum += parse_real("two_qubit_count", f[11]);
      c.depth_sum += parse_real("depth_model", f[12]);
    } catch (const std::invalid_argument&) {
      throw std::runtime_error("malformed results row at line " + std::to_string(line_no));
    }
  }

  fs::create_directories(out_dir);
  std::vector<std::string> written;
  auto write_file = [&](const std::string& name, const std::string& body) {
    fs::path path = fs::path(out_dir) / name;
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << body;
    written.push_back(path.string());
  };

  for (const auto& [alpha, groups] : ratio) {
    std::string label = format_double(alpha);
    std::string csv = "method,topology,p,runs,r_mean,r_std\n";
    std::string txt =
        "approximation ratio vs depth (cvar_alpha = " + label + ")\n";
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-10s %-10s %4s %6s %12s %12s\n", "method",
                  "topology", "p", "runs", "r_mean", "r_std");
    txt += buf;
    for (const auto& [key, s] : groups) {
      const auto& [method, topology, p] = key;
      double n = static_cast<double>(s.runs);
      double mean = s.r_sum / n;
      double dev = sample_std(s.r_sum, s.r_sq, s.runs);
      csv += method + "," + topology + "," + std::to_string(p) + "," +
             std::to_string(s.runs) + "," + format_double(mean) + "," +
             format_double(dev) + "\n";
      std::snprintf(buf, sizeof(buf), "%-10s %-10s %4d %6llu %12.6f %12.6f\n",
                    method.c_str(), topology.c_str(), p,
                    static_cast<unsigned long long>(s.runs), mean, dev);
      txt += buf;
    }
    write_file("ratio_alpha_" + label + ".csv", csv);
    write_file("ratio_alpha_" + label + ".txt", txt);
  }

  {
    std::string csv = "method,topology,p,runs,cnot_mean,two_qubit_mean,depth_mean\n";
    std::string txt = "gate-cost model vs depth\n";
    char buf[200];
    std::snprintf(buf, sizeof(buf), "%-10s %-10s %4s %6s %12s %15s %12s\n", "method",
                  "topology", "p", "runs", "cnot_mean", "two_qubit_mean", "depth_mean");
    txt += buf;
    for (const auto& [key, s] : counts) {
      const auto& [method, topology, p] = key;
      double n = static_cast<double>(s.runs);
      csv += method + "," + topology + "," + std::to_string(p) + "," +
             std::to_string(s.runs) + "," + format_double(s.cnot_sum / n) + "," +
             format_double(s.twoq_sum / n) + "," + format_double(s.depth_sum / n) + "\n";
      std::snprintf(buf, sizeof(buf), "%-10s %-10s %4d %6llu %12.2f %15.2f %12.2f\n",
                    method.c_str(), topology.c_str(), p,
                    static_cast<unsigned long long>(s.runs), s.cnot_sum / n,
                    s.twoq_sum / n, s.depth_sum / n);
      txt += buf;
    }
    write_file("counts.csv", csv);
    write_file("counts.txt", txt);
  }
  return written;
}

SweepSpec parse_sweep_config(const std::string& text) {
  SweepSpec spec;
  for (const auto& [key, values] : config_items(text)) {
    if (apply_generation_key(spec.generation, key, values)) continue;
    if (key == "instances") {
      spec.instance_files = values;
    } else if (key == "methods") {
      spec.methods.clear();
      for (const std::string& v : values) spec.methods.push_back(method_from_string(v));
    } else if (key == "depths") {
      spec.depths.clear();
      for (const std::string& v : values)
        spec.depths.push_back(static_cast<int>(parse_int(key, v)));
    } else if (key == "alphas" || key == "cvar_alphas") {
      spec.cvar_alphas.clear();
      for (const std::string& v : values) spec.cvar_alphas.push_back(parse_real(key, v));
    } else if (key == "topologies") {
      spec.topologies.clear();
      for (const std::string& v : values)
        spec.topologies.push_back(topology_from_string(v));
    } else if (key == "restarts") {
      spec.restarts = static_cast<int>(parse_int(key, single_value(key, values)));
    } else if (key == "max_evals") {
      spec.max_evals = parse_nonneg(key, single_value(key, values));
    } else if (key == "cd_mode") {
      spec.cd_mode = cd_mode_from_string(single_value(key, values));
    } else if (key == "penalty_alpha") {
      spec.penalty_alpha = parse_real(key, single_value(key, values));
    } else if (key == "init" || key == "init_strategy") {
      spec.init_strategy = init_strategy_from_string(single_value(key, values));
    } else if (key == "max_pool_weight") {
      spec.max_pool_weight = static_cast<int>(parse_int(key, single_value(key, values)));
    } else if (key == "seed") {
      spec.seed = parse_nonneg(key, single_value(key, values));
    } else if (key == "jobs") {
      spec.jobs = static_cast<int>(parse_int(key, single_value(key, values)));
    } else if (key == "out") {
      spec.out = single_value(key, values);
    } else {
      throw std::invalid_argument("unknown sweep config key: " + key);
    }
  }
  return spec;
}

GenerationSpec parse_generation_config(const std::string& text) {
  GenerationSpec spec;
  for (const auto& [key, values] : config_items(text))
    if (!apply_generation_key(spec, key, values))
      throw std::invalid_argument("unknown generation config key: " + key);
  return spec;
}

}  // namespace ccdq
