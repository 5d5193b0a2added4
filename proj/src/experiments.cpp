#include "sortedl1l2/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <thread>

#include "sortedl1l2/errors.hpp"
#include "sortedl1l2/problems.hpp"
#include "sortedl1l2/regularizer.hpp"
#include "sortedl1l2/solver_noisy.hpp"

namespace sortedl1l2 {

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt(std::size_t v) { return std::to_string(v); }

struct Cell {
  MatrixKind kind = MatrixKind::oversampled_dct;
  double coherence = 0.0;
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t sparsity = 0;
  double sigma = 0.0;
  bool normalize = false;
};

SolverConfig solver_config_for(const ExperimentConfig& cfg, Setting setting, std::size_t m, std::size_t n) {
  SolverConfig c = setting == Setting::noisefree ? SolverConfig::noisefree_default()
                                                 : SolverConfig::noisy_default(m, n);
  cfg.overrides.apply(c);
  return c;
}

// Runs fn(i) for i in [0, count) on `threads` workers. Each index is
// processed exactly once; callers store results by index.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v) {
  if (v.size() < 2) return v.empty() ? std::numeric_limits<double>::quiet_NaN() : 0.0;
  const double mu = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - mu) * (x - mu);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

const std::vector<std::string>& aggregate_metric_names() {
  static const std::vector<std::string> names{"rel_err", "mse",      "success",     "recall",      "precision",
                                              "topk_hit", "outer_iters", "wall_time_ms", "oracle_mse"};
  return names;
}

SweepResult run_sweep(const ExperimentConfig& cfg, const std::vector<Cell>& cells, Setting setting) {
  cfg.validate();
  const std::size_t trials = cfg.trials;
  const std::size_t tasks = cells.size() * trials;
  std::vector<std::vector<TrialRecord>> results(tasks);

  parallel_for(tasks, cfg.threads, [&](std::size_t task) {
    const Cell& cell = cells[task / trials];
    const std::size_t trial = task % trials;
    ProblemSpec spec;
    spec.matrix_kind = cell.kind;
    spec.m = cell.m;
    spec.n = cell.n;
    spec.coherence_param = cell.coherence;
    spec.sparsity = cell.sparsity;
    spec.min_separation = cfg.min_separation;
    spec.noise_sigma = cell.sigma;
    spec.normalize_columns = cell.normalize;
    spec.seed = derive_seed(cfg.seed, "trial", trial);
    const MeasurementProblem problem = make_problem(spec);
    const Vector& truth = *problem.ground_truth;

    std::optional<double> oracle;
    if (setting == Setting::noisy) {
      const auto support = support_of(truth);
      oracle = oracle_ols_mse(problem.A, support, cell.sigma) / static_cast<double>(cell.n);
    }
    const SolverConfig scfg = solver_config_for(cfg, setting, cell.m, cell.n);

    auto& out = results[task];
    for (const auto& name : cfg.solvers) {
      TrialRecord rec;
      rec.solver = name;
      rec.spec_digest = spec.digest();
      rec.matrix_kind = std::string(to_string(cell.kind));
      rec.coherence_param = cell.coherence;
      rec.m = cell.m;
      rec.n = cell.n;
      rec.sparsity = cell.sparsity;
      rec.seed = spec.seed;
      rec.oracle_mse = oracle;
      const auto t0 = std::chrono::steady_clock::now();
      Vector x;
      try {
        RecoveryResult r = solve_by_name(name, problem, setting, scfg);
        x = std::move(r.x);
        rec.outer_iters = r.outer_iters;
      } catch (const std::exception& e) {
        rec.error = e.what();
        x.assign(cell.n, 0.0);
      }
      const auto t1 = std::chrono::steady_clock::now();
      rec.wall_time_ms = cfg.timing ? std::chrono::duration<double, std::milli>(t1 - t0).count() : 0.0;
      score_trial(rec, x, truth);
      out.push_back(std::move(rec));
    }
  });

  SweepResult res;
  for (auto& v : results)
    for (auto& r : v) res.trials.push_back(std::move(r));

  res.trial_csv.header = trial_csv_columns();
  for (const auto& r : res.trials) res.trial_csv.rows.push_back(trial_csv_row(r));

  res.aggregate_csv.header = {"solver", "matrix_kind", "coherence_param", "m", "n", "sparsity", "trials", "failures"};
  for (const auto& name : aggregate_metric_names()) {
    res.aggregate_csv.header.push_back("mean_" + name);
    res.aggregate_csv.header.push_back("std_" + name);
  }

  const std::size_t ns = cfg.solvers.size();
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (std::size_t s = 0; s < ns; ++s) {
      std::vector<std::vector<double>> cols(aggregate_metric_names().size());
      std::size_t failures = 0;
      for (std::size_t t = 0; t < trials; ++t) {
        const TrialRecord& r = res.trials[(c * trials + t) * ns + s];
        cols[0].push_back(r.rel_err);
        cols[1].push_back(r.mse);
        cols[2].push_back(r.success ? 1.0 : 0.0);
        cols[3].push_back(r.recall);
        cols[4].push_back(r.precision);
        cols[5].push_back(r.topk_hit);
        cols[6].push_back(static_cast<double>(r.outer_iters));
        cols[7].push_back(r.wall_time_ms);
        if (r.oracle_mse) cols[8].push_back(*r.oracle_mse);
        failures += !r.error.empty();
      }
      const Cell& cell = cells[c];
      AggregateRow a;
      a.solver = cfg.solvers[s];
      a.matrix_kind = std::string(to_string(cell.kind));
      a.coherence_param = cell.coherence;
      a.m = cell.m;
      a.n = cell.n;
      a.sparsity = cell.sparsity;
      a.trials = trials;
      a.failures = failures;
      a.mean_rel_err = mean_of(cols[0]);
      a.mean_mse = mean_of(cols[1]);
      a.success_rate = mean_of(cols[2]);
      a.mean_recall = mean_of(cols[3]);
      a.mean_precision = mean_of(cols[4]);
      a.mean_topk_hit = mean_of(cols[5]);
      a.mean_outer_iters = mean_of(cols[6]);
      a.mean_wall_time_ms = mean_of(cols[7]);
      a.mean_oracle_mse = mean_of(cols[8]);
      res.aggregate.push_back(a);

      std::vector<std::string> row{a.solver, a.matrix_kind, fmt(a.coherence_param), fmt(a.m), fmt(a.n),
                                   fmt(a.sparsity), fmt(a.trials), fmt(a.failures)};
      for (const auto& col : cols) {
        row.push_back(fmt(mean_of(col)));
        row.push_back(fmt(std_of(col)));
      }
      res.aggregate_csv.rows.push_back(std::move(row));
    }
  }
  return res;
}

}  // namespace

std::string CsvTable::body() const {
  std::string out;
  auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  emit(header);
  for (const auto& r : rows) emit(r);
  return out;
}

const std::vector<std::string>& trial_csv_columns() {
  static const std::vector<std::string> cols{
      "solver",   "matrix_kind", "coherence_param", "m",           "n",            "sparsity",
      "seed",     "spec_digest", "rel_err",         "mse",         "success",      "recall",
      "precision", "topk_hit",   "outer_iters",     "wall_time_ms", "oracle_mse",  "error"};
  return cols;
}

std::vector<std::string> trial_csv_row(const TrialRecord& r) {
  // keep messages on one unquoted field
  std::string err = r.error;
  std::replace_if(err.begin(), err.end(), [](char c) { return c == ',' || c == '\n' || c == '\r' || c == '"'; }, ';');
  return {r.solver,         r.matrix_kind,    fmt(r.coherence_param),
          fmt(r.m),         fmt(r.n),         fmt(r.sparsity),
          std::to_string(r.seed), r.spec_digest, fmt(r.rel_err),
          fmt(r.mse),       r.success ? "1" : "0", fmt(r.recall),
          fmt(r.precision), fmt(r.topk_hit),  fmt(r.outer_iters),
          fmt(r.wall_time_ms), r.oracle_mse ? fmt(*r.oracle_mse) : std::string(), err};
}

Vector toy_point(double a, double k) { return {-a * k + 1.0, 2.0 * k + 1.0, k, k}; }

double ToyResult::argmin(const std::string& model, double a) const {
  for (const auto& m : minima)
    if (m.model == model && m.a == a) return m.argmin_k;
  throw std::out_of_range("no toy argmin for model " + model);
}

ToyResult run_toy(const ExperimentConfig& cfg) {
  struct Model {
    std::string name;
    std::function<double(const Vector&)> f;
  };
  std::vector<Model> models{
      {"l1", [](const Vector& x) { return norm1(x); }},
      {"l1-l2", [](const Vector& x) { return norm1(x) - norm2(x); }},
      {"l1l2", [](const Vector& x) { return norm1(x) / norm2(x); }},
      {"sorted", [t = cfg.toy_t, r = cfg.toy_r](const Vector& x) { return eval_ratio(x, build_weights(x, t, r)); }},
  };
  for (double r : cfg.r_list) {
    models.push_back({"sorted_r" + fmt(r),
                      [t = cfg.toy_t, r](const Vector& x) { return eval_ratio(x, build_weights(x, t, r)); }});
  }

  ToyResult res;
  res.objectives.header = {"a", "k"};
  for (const auto& m : models) res.objectives.header.push_back(m.name);
  res.argmins.header = {"a", "model", "argmin_k", "min_value"};

  const std::vector<double> a_values{-3.0, 3.5, 4.0};
  for (double a : a_values) {
    std::vector<double> best(models.size(), std::numeric_limits<double>::infinity());
    std::vector<double> best_k(models.size(), 0.0);
    for (int i = 0; i <= 400; ++i) {
      const double k = static_cast<double>(i - 200) / 100.0;
      const Vector x = toy_point(a, k);
      std::vector<std::string> row{fmt(a), fmt(k)};
      for (std::size_t mi = 0; mi < models.size(); ++mi) {
        const double v = models[mi].f(x);
        row.push_back(fmt(v));
        if (v < best[mi]) {
          best[mi] = v;
          best_k[mi] = k;
        }
      }
      res.objectives.rows.push_back(std::move(row));
    }
    for (std::size_t mi = 0; mi < models.size(); ++mi) {
      res.minima.push_back({a, models[mi].name, best_k[mi], best[mi]});
      res.argmins.rows.push_back({fmt(a), models[mi].name, fmt(best_k[mi]), fmt(best[mi])});
    }
  }
  return res;
}

const AggregateRow& SweepResult::cell(const std::string& solver, std::size_t sparsity, double coherence,
                                      std::size_t m) const {
  for (const auto& a : aggregate)
    if (a.solver == solver && a.sparsity == sparsity && a.coherence_param == coherence && (m == 0 || a.m == m))
      return a;
  throw std::out_of_range("no aggregate row for solver " + solver);
}

SweepResult run_phase(const ExperimentConfig& cfg) {
  std::vector<Cell> cells;
  for (double c : cfg.coherence)
    for (std::size_t s : cfg.sparsity)
      cells.push_back({cfg.matrix_kind, c, cfg.m, cfg.n, s, 0.0, cfg.normalize_columns});
  return run_sweep(cfg, cells, Setting::noisefree);
}

SweepResult run_support(const ExperimentConfig& cfg) { return run_phase(cfg); }

SweepResult run_noisy_table(const ExperimentConfig& cfg) {
  std::vector<Cell> cells;
  for (double c : cfg.coherence)
    for (std::size_t s : cfg.sparsity)
      for (std::size_t m : cfg.m_list)
        cells.push_back({cfg.matrix_kind, c, m, cfg.n, s, cfg.noise_sigma, cfg.normalize_columns});
  return run_sweep(cfg, cells, Setting::noisy);
}

std::vector<TracePoint> ConvergenceResult::series(const std::string& setting, std::size_t inner_max) const {
  std::vector<TracePoint> out;
  for (const auto& p : points)
    if (p.setting == setting && p.inner_max == inner_max) out.push_back(p);
  return out;
}

ConvergenceResult run_convergence(const ExperimentConfig& cfg) {
  cfg.validate();
  ConvergenceResult res;

  // noise-free
  {
    ProblemSpec spec;
    spec.matrix_kind = cfg.matrix_kind;
    spec.m = cfg.m;
    spec.n = cfg.n;
    spec.coherence_param = cfg.coherence.front();
    spec.sparsity = cfg.sparsity.front();
    spec.min_separation = cfg.min_separation;
    spec.normalize_columns = cfg.normalize_columns;
    spec.seed = derive_seed(cfg.seed, "trial", 0);
    const MeasurementProblem problem = make_problem(spec);
    SolverConfig scfg = solver_config_for(cfg, Setting::noisefree, spec.m, spec.n);
    scfg.record_iterates = true;
    const DcaPenalty pen = sorted_penalty(scfg, 1.0);
    const RecoveryResult r = run_dca_noisefree(problem, scfg, pen);
    for (std::size_t k = 0; k < r.iterates.size(); ++k) {
      const double obj = k == 0 ? pen.value(r.iterates[0], 1) : r.objective_trace[k - 1];
      res.points.push_back({"noisefree", 0, k, relative_error(r.iterates[k], *problem.ground_truth), obj});
    }
  }

  // noisy, one trace per inner iteration cap
  {
    ProblemSpec spec;
    spec.matrix_kind = MatrixKind::correlated_gaussian;
    spec.m = cfg.noisy_m;
    spec.n = cfg.noisy_n;
    spec.coherence_param = cfg.noisy_coherence;
    spec.sparsity = cfg.noisy_sparsity;
    spec.min_separation = cfg.min_separation;
    spec.noise_sigma = cfg.noisy_sigma;
    spec.normalize_columns = true;
    spec.seed = derive_seed(cfg.seed, "trial", 0);
    const MeasurementProblem problem = make_problem(spec);
    std::vector<std::vector<TracePoint>> per(cfg.inner_max_list.size());
    parallel_for(per.size(), cfg.threads, [&](std::size_t i) {
      SolverConfig scfg = solver_config_for(cfg, Setting::noisy, spec.m, spec.n);
      scfg.inner_max = cfg.inner_max_list[i];
      scfg.record_iterates = true;
      const DcaPenalty pen = sorted_penalty(scfg, scfg.lambda);
      const RecoveryResult r = run_dca_noisy(problem, scfg, pen);
      for (std::size_t k = 0; k < r.iterates.size(); ++k) {
        double obj;
        if (k == 0) {
          const Vector res0 = subtract(matvec(problem.A, r.iterates[0]), problem.b);
          obj = pen.value(r.iterates[0], 1) + 0.5 * dot(res0, res0);
        } else {
          obj = r.objective_trace[k - 1];
        }
        per[i].push_back({"noisy", scfg.inner_max, k, relative_error(r.iterates[k], *problem.ground_truth), obj});
      }
    });
    for (auto& v : per)
      for (auto& p : v) res.points.push_back(p);
  }

  res.csv.header = {"setting", "inner_max", "iteration", "rel_err", "objective"};
  for (const auto& p : res.points)
    res.csv.rows.push_back({p.setting, fmt(p.inner_max), fmt(p.iteration), fmt(p.rel_err), fmt(p.objective)});
  return res;
}

std::vector<std::pair<std::string, CsvTable>> run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.kind) {
    case ExperimentKind::toy: {
      ToyResult r = run_toy(cfg);
      return {{"toy_objective.csv", std::move(r.objectives)}, {"toy_argmin.csv", std::move(r.argmins)}};
    }
    case ExperimentKind::phase: {
      SweepResult r = run_phase(cfg);
      return {{"phase_trials.csv", std::move(r.trial_csv)}, {"phase_aggregate.csv", std::move(r.aggregate_csv)}};
    }
    case ExperimentKind::noisy_table: {
      SweepResult r = run_noisy_table(cfg);
      return {{"noisy_table_trials.csv", std::move(r.trial_csv)},
              {"noisy_table_aggregate.csv", std::move(r.aggregate_csv)}};
    }
    case ExperimentKind::support: {
      SweepResult r = run_support(cfg);
      return {{"support_trials.csv", std::move(r.trial_csv)}, {"support_aggregate.csv", std::move(r.aggregate_csv)}};
    }
    case ExperimentKind::convergence: {
      ConvergenceResult r = run_convergence(cfg);
      return {{"convergence_traces.csv", std::move(r.csv)}};
    }
  }
  return {};
}

void write_tables(const std::string& dir, const ExperimentConfig& cfg,
                  const std::vector<std::pair<std::string, CsvTable>>& tables) {
  std::filesystem::create_directories(dir);
  const std::time_t now = std::time(nullptr);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  for (const auto& [name, table] : tables) {
    const auto path = std::filesystem::path(dir) / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << "# sortedl1l2 " << to_string(cfg.kind) << " seed=" << cfg.seed << " generated " << stamp << '\n';
    f << table.body();
    if (!f) throw std::runtime_error("write failed for " + path.string());
  }
}

}  // namespace sortedl1l2
