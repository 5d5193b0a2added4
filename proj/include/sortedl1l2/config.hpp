#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sortedl1l2/problems.hpp"
#include "sortedl1l2/solver.hpp"

namespace sortedl1l2 {

enum class ExperimentKind { toy, phase, noisy_table, support, convergence };

std::string_view to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(std::string_view name);

/// Raised for malformed or unknown configuration input.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Optional overrides applied on top of the per-setting solver defaults
/// (noise-free or noisy). They configure the sorted solvers; the baselines
/// keep their fixed parameters apart from iteration caps and tolerances.
struct SolverOverrides {
  std::optional<double> alpha;
  std::optional<double> lambda;
  std::optional<double> delta;
  std::optional<std::size_t> outer_max;
  std::optional<std::size_t> inner_max;
  std::optional<double> tol_outer;
  std::optional<double> tol_inner;
  std::optional<SubproblemKind> subproblem;
  std::optional<bool> box;
  std::optional<ScheduleMode> schedule_mode;
  std::optional<std::size_t> t1;
  std::optional<double> r1;
  std::optional<std::size_t> t2;
  std::optional<double> r2;
  std::optional<std::size_t> switch_iter;

  void apply(SolverConfig& cfg) const;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::phase;
  MatrixKind matrix_kind = MatrixKind::oversampled_dct;
  std::vector<double> coherence{5.0};
  std::size_t m = 64;
  std::size_t n = 1024;
  std::vector<std::size_t> sparsity{8};
  std::vector<std::size_t> m_list;
  double noise_sigma = 0.0;
  std::size_t min_separation = 1;
  bool normalize_columns = false;
  std::vector<std::string> solvers{"l1", "sorted"};
  std::size_t trials = 10;
  std::uint64_t seed = 0;
  std::string out = "results";
  std::size_t threads = 1;
  /// When false, wall-clock columns are written as 0 so reruns are byte-identical.
  bool timing = true;
  SolverOverrides overrides;
  // toy
  std::size_t toy_t = 2;
  double toy_r = 5.0;
  std::vector<double> r_list{1.0, 5.0, 10.0};
  // convergence
  std::vector<std::size_t> inner_max_list{1, 5, 20, 100};
  std::size_t noisy_m = 360;
  std::size_t noisy_n = 512;
  std::size_t noisy_sparsity = 130;
  double noisy_sigma = 0.1;
  double noisy_coherence = 0.0;

  /// Full-size defaults for each experiment.
  static ExperimentConfig defaults_for(ExperimentKind kind);

  /// Throws ConfigError on an unknown key or an ill-typed value.
  void set(std::string_view key, std::string_view json_value);
  void validate() const;
};

/// Flat `key = value` lines; values are JSON (numbers, strings in quotes,
/// booleans, arrays). `#` starts a comment. The `experiment` key, when
/// present, selects the defaults the remaining keys apply to.
ExperimentConfig parse_config_text(std::string_view text, std::optional<ExperimentKind> kind = std::nullopt);
ExperimentConfig load_config_file(const std::string& path, std::optional<ExperimentKind> kind = std::nullopt);

/// All recognised keys.
const std::vector<std::string_view>& config_keys();

}  // namespace sortedl1l2
