#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "sortedl1l2/baselines.hpp"
#include "sortedl1l2/config.hpp"
#include "sortedl1l2/metrics.hpp"

namespace sortedl1l2 {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Header plus rows, comma separated, newline terminated.
  std::string body() const;
};

/// Column names of per-trial CSV files.
const std::vector<std::string>& trial_csv_columns();
std::vector<std::string> trial_csv_row(const TrialRecord& r);

// ---- toy example -----------------------------------------------------------

struct ToyArgmin {
  double a = 0.0;
  std::string model;
  double argmin_k = 0.0;
  double min_value = 0.0;
};

struct ToyResult {
  CsvTable objectives;
  CsvTable argmins;
  std::vector<ToyArgmin> minima;

  /// Grid argmin for (model, a); throws std::out_of_range when absent.
  double argmin(const std::string& model, double a) const;
};

/// Objective of each model along x(k) = (−ak+1, 2k+1, k, k), k ∈ [−2, 2] step 0.01.
/// Models: "l1", "l1-l2", "l1l2", "sorted" (toy_t, toy_r) and "sorted_r<r>" per r_list.
ToyResult run_toy(const ExperimentConfig& cfg);

/// The toy family point for parameter a at k.
Vector toy_point(double a, double k);

// ---- seeded trial sweeps ---------------------------------------------------

struct AggregateRow {
  std::string solver;
  std::string matrix_kind;
  double coherence_param = 0.0;
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t sparsity = 0;
  std::size_t trials = 0;
  std::size_t failures = 0;
  double success_rate = 0.0;
  double mean_rel_err = 0.0;
  double mean_mse = 0.0;
  double mean_recall = 0.0;
  double mean_precision = 0.0;
  double mean_topk_hit = 0.0;
  double mean_outer_iters = 0.0;
  double mean_wall_time_ms = 0.0;
  /// NaN when the experiment carries no oracle.
  double mean_oracle_mse = 0.0;
};

struct SweepResult {
  std::vector<TrialRecord> trials;
  std::vector<AggregateRow> aggregate;
  CsvTable trial_csv;
  CsvTable aggregate_csv;

  /// Throws std::out_of_range when no row matches.
  const AggregateRow& cell(const std::string& solver, std::size_t sparsity, double coherence,
                           std::size_t m = 0) const;
};

/// Noise-free success-rate sweep over coherence × sparsity × solver.
SweepResult run_phase(const ExperimentConfig& cfg);
/// Noisy MSE sweep over m_list × solver, with the per-entry oracle OLS MSE.
SweepResult run_noisy_table(const ExperimentConfig& cfg);
/// Noise-free support-detection sweep (recall, precision, top-k hit).
SweepResult run_support(const ExperimentConfig& cfg);

// ---- convergence traces ----------------------------------------------------

struct TracePoint {
  std::string setting;  // "noisefree" or "noisy"
  std::size_t inner_max = 0;
  std::size_t iteration = 0;
  double rel_err = 0.0;
  double objective = 0.0;
};

struct ConvergenceResult {
  std::vector<TracePoint> points;
  CsvTable csv;

  std::vector<TracePoint> series(const std::string& setting, std::size_t inner_max = 0) const;
};

ConvergenceResult run_convergence(const ExperimentConfig& cfg);

// ---- output ----------------------------------------------------------------

/// Runs the configured experiment and returns (file name, table) pairs.
std::vector<std::pair<std::string, CsvTable>> run_experiment(const ExperimentConfig& cfg);

/// Writes each table to cfg.out/<name> preceded by a single `# ...` line
/// carrying the experiment name and a timestamp.
void write_tables(const std::string& dir, const ExperimentConfig& cfg,
                  const std::vector<std::pair<std::string, CsvTable>>& tables);

}  // namespace sortedl1l2
