#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "config.hpp"
#include "optimizers.hpp"
#include "problems.hpp"

namespace boundopt {

// Unreadable, unwritable, or malformed trace / checkpoint / summary files.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One recorded step of an experiment. x_norm holds the post-step iterate
// itself in dimension one (sign matters for the adversarial checks) and its
// l2 norm otherwise. The lr columns are order statistics of the clipped
// per-coordinate rates before the 1/sqrt(t) decay, so for the bounded
// methods they sit inside [eta_lower(t), eta_upper(t)] by construction.
struct TraceRecord {
  int64_t t = 0;
  double loss = 0.0;
  double cum_loss = 0.0;
  double regret = 0.0;
  double avg_regret = 0.0;
  double x_norm = 0.0;
  double lr_min = 0.0;
  double lr_median = 0.0;
  double lr_max = 0.0;
  double wall_clock = 0.0;  // seconds since run start; in memory only, never serialized
};

struct LrStats {
  double min = 0.0;
  double median = 0.0;  // lower-middle element for even counts
  double max = 0.0;
};

LrStats lr_statistics(std::span<const double> rates);
// Order statistics of the effective rates the last step used.
LrStats lr_statistics(const OptimizerState& state, const OptimizerConfig& cfg);

struct RunResult {
  std::vector<TraceRecord> records;
  OptimizerState final_state;
  // Aligned with records: sum_i 1/rate_predecay_i, and the running max l2
  // gradient norm, both needed to evaluate the regret bound a posteriori.
  std::vector<double> rate_inv_sum;
  std::vector<double> grad_norm_max;
};

struct RunConfig {
  ProblemInstance problem;
  OptimizerConfig optimizer;
  std::vector<double> x1;
  int64_t steps = 1;
  uint64_t seed = 0;  // carried for logging; the problem embeds its own copy
  int64_t record_every = 1;
  std::string output_path;  // non-empty: write the trace here after the run
};

// Execute exactly `steps` online rounds: evaluate f_t at the current iterate,
// step the optimizer with the gradient, record every `record_every` steps and
// at the final step. Deterministic in (config, seed): identical bytes on
// re-run.
RunResult run_experiment(const RunConfig& cfg);

// The Corollary regret bound with measured final clipped rates:
//   D_inf^2 sqrt(T) / (2(1-beta1)) * eta_hat_inv_sum
//     + beta1 d D_inf^2 / (2(1-beta1)(1-lambda)^2 L_inf)
//     + (2 sqrt(T) - 1) R_inf G2^2 / (1-beta1)
// where L_inf = eta_lower(1), R_inf = eta_upper(1).
double theorem4_bound(double d_inf, int64_t d, double beta1, double lambda, double l_inf,
                      double r_inf, double g2, int64_t steps, double eta_hat_inv_sum);

// Trace persistence. Header and column order are fixed:
//   t,loss,cum_loss,regret,avg_regret,x_norm,lr_min,lr_median,lr_max
// Floats are rendered with 17 significant digits so read_trace is the exact
// inverse of write_trace.
extern const char kTraceHeader[];
std::string serialize_trace(std::span<const TraceRecord> records);
void write_trace(std::span<const TraceRecord> records, const std::string& path);
std::vector<TraceRecord> read_trace(const std::string& path);

// Optimizer state snapshot as key=value text (t, x, m, v, v_hat, g_sum_sq;
// vectors comma-joined, 17 significant digits). Loading rebuilds the
// beta1 product by multiplying beta1_at(cfg, 1..t) in ascending order, the
// same sequence the steps performed, so resumed runs are bit-identical.
void write_checkpoint(const OptimizerState& state, const std::string& path);
OptimizerState read_checkpoint(const std::string& path, const OptimizerConfig& cfg);

// One grid point of a sweep. Failed points carry the error text and NaN
// metrics; the sweep itself keeps going.
struct SweepPoint {
  int64_t index = 0;
  std::string param_values;  // "key=value;key2=value2"
  double final_loss = 0.0;
  double final_avg_regret = 0.0;
  std::string trace_path;
  std::string error;
};

// Cartesian product of the sweep.grid axes over the base config (last axis
// fastest). Each point runs with seed derive_seed(base seed, index) unless
// run.seed is itself an axis. Points execute concurrently; results are
// ordered by index. Traces land in out_dir as run_<confighash>.csv.
std::vector<SweepPoint> run_sweep(const ConfigMap& base, const std::string& out_dir);

// Summary CSV: grid_point,param_values,final_loss,final_avg_regret,path
void write_sweep_summary(std::span<const SweepPoint> points, const std::string& path);

}  // namespace boundopt
