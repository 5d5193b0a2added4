#include "sortedl1l2/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sortedl1l2/baselines.hpp"
#include "sortedl1l2/errors.hpp"

namespace sortedl1l2 {

using nlohmann::json;

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::toy:
      return "toy";
    case ExperimentKind::phase:
      return "phase";
    case ExperimentKind::noisy_table:
      return "noisy_table";
    case ExperimentKind::support:
      return "support";
    case ExperimentKind::convergence:
      return "convergence";
  }
  return "unknown";
}

ExperimentKind experiment_kind_from_string(std::string_view name) {
  if (name == "toy") return ExperimentKind::toy;
  if (name == "phase") return ExperimentKind::phase;
  if (name == "noisy_table" || name == "noisy-table") return ExperimentKind::noisy_table;
  if (name == "support") return ExperimentKind::support;
  if (name == "convergence") return ExperimentKind::convergence;
  throw ConfigError("unknown experiment kind: " + std::string(name));
}

void SolverOverrides::apply(SolverConfig& cfg) const {
  if (alpha) cfg.alpha = *alpha;
  if (lambda) cfg.lambda = *lambda;
  if (delta) cfg.delta = *delta;
  if (outer_max) cfg.outer_max = *outer_max;
  if (inner_max) cfg.inner_max = *inner_max;
  if (tol_outer) cfg.tol_outer = *tol_outer;
  if (tol_inner) cfg.tol_inner = *tol_inner;
  if (subproblem) cfg.subproblem = *subproblem;
  if (box) cfg.box = *box;
  if (schedule_mode) cfg.schedule.mode = *schedule_mode;
  if (t1) cfg.schedule.stage1.t = *t1;
  if (r1) cfg.schedule.stage1.r = *r1;
  if (t2) cfg.schedule.stage2.t = *t2;
  if (r2) cfg.schedule.stage2.r = *r2;
  if (switch_iter) cfg.schedule.switch_iter = *switch_iter;
}

namespace {

std::vector<std::size_t> range_step(std::size_t from, std::size_t to, std::size_t step) {
  std::vector<std::size_t> v;
  for (std::size_t x = from; x <= to; x += step) v.push_back(x);
  return v;
}

template <typename T>
T as(const json& j, std::string_view key) {
  try {
    if constexpr (std::is_same_v<T, std::size_t> || std::is_same_v<T, std::uint64_t>) {
      if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
        throw ConfigError("expected a nonnegative integer");
      return j.get<T>();
    } else if constexpr (std::is_same_v<T, double>) {
      if (!j.is_number()) throw ConfigError("expected a number");
      return j.get<double>();
    } else if constexpr (std::is_same_v<T, bool>) {
      if (!j.is_boolean()) throw ConfigError("expected a boolean");
      return j.get<bool>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!j.is_string()) throw ConfigError("expected a string");
      return j.get<std::string>();
    }
  } catch (const ConfigError& e) {
    throw ConfigError("config key '" + std::string(key) + "': " + e.what());
  }
}

template <typename T>
std::vector<T> as_list(const json& j, std::string_view key) {
  std::vector<T> out;
  if (!j.is_array()) {
    out.push_back(as<T>(j, key));
    return out;
  }
  for (const auto& e : j) out.push_back(as<T>(e, key));
  return out;
}

}  // namespace

ExperimentConfig ExperimentConfig::defaults_for(ExperimentKind kind) {
  ExperimentConfig c;
  c.kind = kind;
  const std::vector<std::string> all{"l1", "l1-l2", "l1l2", "sorted"};
  switch (kind) {
    case ExperimentKind::toy:
      break;
    case ExperimentKind::phase:
      c.matrix_kind = MatrixKind::oversampled_dct;
      c.coherence = {5.0, 10.0};
      c.sparsity = range_step(2, 40, 2);
      c.solvers = all;
      c.trials = 50;
      break;
    case ExperimentKind::noisy_table:
      c.matrix_kind = MatrixKind::correlated_gaussian;
      c.coherence = {0.0};
      c.n = 512;
      c.m_list = range_step(250, 360, 10);
      c.m = 360;
      c.sparsity = {130};
      c.noise_sigma = 0.1;
      c.normalize_columns = true;
      c.solvers = all;
      c.trials = 50;
      break;
    case ExperimentKind::support:
      c.matrix_kind = MatrixKind::correlated_gaussian;
      c.coherence = {0.1};
      c.sparsity = range_step(10, 20, 2);
      c.solvers = all;
      c.trials = 100;
      break;
    case ExperimentKind::convergence:
      c.matrix_kind = MatrixKind::oversampled_dct;
      c.coherence = {5.0};
      // sparse enough for sorted, dense enough that basis pursuit usually misses
      c.sparsity = {12};
      c.solvers = {"sorted"};
      c.trials = 1;
      break;
  }
  return c;
}

const std::vector<std::string_view>& config_keys() {
  static const std::vector<std::string_view> keys{
      "experiment", "matrix_kind", "coherence", "m", "n", "sparsity", "m_list", "noise_sigma",
      "min_separation", "normalize_columns", "solvers", "trials", "seed", "out", "threads", "timing",
      "alpha", "lambda", "delta", "outer_max", "inner_max", "tol_outer", "tol_inner", "subproblem", "box",
      "schedule_mode", "t1", "r1", "t2", "r2", "switch_iter", "toy_t", "toy_r", "r_list", "inner_max_list",
      "noisy_m", "noisy_n", "noisy_sparsity", "noisy_sigma", "noisy_coherence"};
  return keys;
}

void ExperimentConfig::set(std::string_view key, std::string_view json_value) {
  json j;
  try {
    j = json::parse(json_value);
  } catch (const json::parse_error&) {
    throw ConfigError("config key '" + std::string(key) + "': value is not valid JSON: " + std::string(json_value));
  }
  auto& o = overrides;
  try {
    if (key == "experiment") kind = experiment_kind_from_string(as<std::string>(j, key));
    else if (key == "matrix_kind") matrix_kind = matrix_kind_from_string(as<std::string>(j, key));
    else if (key == "coherence") coherence = as_list<double>(j, key);
    else if (key == "m") m = as<std::size_t>(j, key);
    else if (key == "n") n = as<std::size_t>(j, key);
    else if (key == "sparsity") sparsity = as_list<std::size_t>(j, key);
    else if (key == "m_list") m_list = as_list<std::size_t>(j, key);
    else if (key == "noise_sigma") noise_sigma = as<double>(j, key);
    else if (key == "min_separation") min_separation = as<std::size_t>(j, key);
    else if (key == "normalize_columns") normalize_columns = as<bool>(j, key);
    else if (key == "solvers") solvers = as_list<std::string>(j, key);
    else if (key == "trials") trials = as<std::size_t>(j, key);
    else if (key == "seed") seed = as<std::uint64_t>(j, key);
    else if (key == "out") out = as<std::string>(j, key);
    else if (key == "threads") threads = as<std::size_t>(j, key);
    else if (key == "timing") timing = as<bool>(j, key);
    else if (key == "alpha") o.alpha = as<double>(j, key);
    else if (key == "lambda") o.lambda = as<double>(j, key);
    else if (key == "delta") o.delta = as<double>(j, key);
    else if (key == "outer_max") o.outer_max = as<std::size_t>(j, key);
    else if (key == "inner_max") o.inner_max = as<std::size_t>(j, key);
    else if (key == "tol_outer") o.tol_outer = as<double>(j, key);
    else if (key == "tol_inner") o.tol_inner = as<double>(j, key);
    else if (key == "subproblem") o.subproblem = subproblem_from_string(as<std::string>(j, key));
    else if (key == "box") o.box = as<bool>(j, key);
    else if (key == "schedule_mode") o.schedule_mode = schedule_mode_from_string(as<std::string>(j, key));
    else if (key == "t1") o.t1 = as<std::size_t>(j, key);
    else if (key == "r1") o.r1 = as<double>(j, key);
    else if (key == "t2") o.t2 = as<std::size_t>(j, key);
    else if (key == "r2") o.r2 = as<double>(j, key);
    else if (key == "switch_iter") o.switch_iter = as<std::size_t>(j, key);
    else if (key == "toy_t") toy_t = as<std::size_t>(j, key);
    else if (key == "toy_r") toy_r = as<double>(j, key);
    else if (key == "r_list") r_list = as_list<double>(j, key);
    else if (key == "inner_max_list") inner_max_list = as_list<std::size_t>(j, key);
    else if (key == "noisy_m") noisy_m = as<std::size_t>(j, key);
    else if (key == "noisy_n") noisy_n = as<std::size_t>(j, key);
    else if (key == "noisy_sparsity") noisy_sparsity = as<std::size_t>(j, key);
    else if (key == "noisy_sigma") noisy_sigma = as<double>(j, key);
    else if (key == "noisy_coherence") noisy_coherence = as<double>(j, key);
    else throw ConfigError("unknown config key: " + std::string(key));
  } catch (const ContractViolation& e) {
    throw ConfigError("config key '" + std::string(key) + "': " + e.what());
  }
}

void ExperimentConfig::validate() const {
  if (trials == 0) throw ConfigError("trials must be at least 1");
  if (threads == 0) throw ConfigError("threads must be at least 1");
  if (kind == ExperimentKind::toy) return;
  if (coherence.empty()) throw ConfigError("coherence list must be nonempty");
  if (sparsity.empty()) throw ConfigError("sparsity list must be nonempty");
  if (kind == ExperimentKind::noisy_table && m_list.empty()) throw ConfigError("m_list must be nonempty");
  if (solvers.empty()) throw ConfigError("solver list must be nonempty");
  for (const auto& s : solvers)
    if (!is_known_solver(s)) throw ConfigError("unknown solver: " + s);
  if (kind == ExperimentKind::convergence && inner_max_list.empty())
    throw ConfigError("inner_max_list must be nonempty");
}

ExperimentConfig parse_config_text(std::string_view text, std::optional<ExperimentKind> kind) {
  struct Entry {
    std::string key;
    std::string value;
    std::size_t line;
  };
  std::vector<Entry> entries;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    // '#' outside a string starts a comment
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.resize(i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    entries.push_back({trim(line.substr(0, eq)), trim(line.substr(eq + 1)), lineno});
  }

  ExperimentKind chosen = kind.value_or(ExperimentKind::phase);
  for (const auto& e : entries) {
    if (e.key == "experiment") {
      ExperimentConfig probe;
      probe.set(e.key, e.value);
      if (kind && probe.kind != *kind)
        throw ConfigError("config file is for experiment '" + std::string(to_string(probe.kind)) + "'");
      chosen = probe.kind;
    }
  }
  ExperimentConfig cfg = ExperimentConfig::defaults_for(chosen);
  for (const auto& e : entries) {
    try {
      cfg.set(e.key, e.value);
    } catch (const ConfigError& err) {
      throw ConfigError("config line " + std::to_string(e.line) + ": " + err.what());
    }
  }
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path, std::optional<ExperimentKind> kind) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str(), kind);
}

}  // namespace sortedl1l2
