#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "geometry.hpp"
#include "schedules.hpp"

namespace boundopt {

enum class Method { kSgd, kSgdm, kAdaGrad, kRmsProp, kAdam, kAmsGrad, kAdaBound, kAmsBound };
enum class Beta1Schedule { kConstant, kLambdaDecay, kOneOverT };
enum class StepScheme { kDecreasing, kConstant };

const char* method_name(Method m);
Method method_from_name(std::string_view name);
const char* beta1_schedule_name(Beta1Schedule s);
Beta1Schedule beta1_schedule_from_name(std::string_view name);
const char* step_scheme_name(StepScheme s);
StepScheme step_scheme_from_name(std::string_view name);

// epsilon sentinel: resolve to the per-method default at use time.
inline constexpr double kEpsilonAuto = -1.0;

struct OptimizerConfig {
  Method method = Method::kAdaBound;
  double alpha = 0.001;

  Beta1Schedule beta1_schedule = Beta1Schedule::kConstant;
  double beta1 = 0.9;
  double lambda = 0.9;  // decay rate when beta1_schedule == kLambdaDecay

  double beta2 = 0.999;
  double epsilon = kEpsilonAuto;
  double momentum_gamma = 0.9;  // heavy-ball factor for sgdm

  StepScheme step_scheme = StepScheme::kConstant;
  bool bias_correction = false;

  BoundSchedule bound = BoundSchedule::paper_default(0.999);

  // 1e-8 for the adaptive unbounded methods, 0 for adabound/amsbound (the
  // clip already regularizes) except under the adam_unbounded form, where the
  // raw rate needs the perturbation to stay finite.
  double effective_epsilon() const;

  bool is_bounded_method() const;   // adabound / amsbound
  bool uses_first_moment() const;   // adam-family EMA momentum
  bool uses_second_moment() const;  // EMA of squared gradients

  void validate() const;  // throws std::invalid_argument on hard errors
  // Non-empty when beta1 >= sqrt(beta2) on a bounded method (the convergence
  // analysis assumes beta1 < sqrt(beta2)); advisory only, never fatal.
  std::string hyperparameter_warning() const;
};

// Momentum factor at step t: constant beta1, beta1 * lambda^(t-1), or beta1/t.
double beta1_at(const OptimizerConfig& cfg, int64_t t);

struct OptimizerState {
  int64_t t = 0;
  std::vector<double> x;
  std::vector<double> m;         // first moment (adam family) or heavy-ball buffer (sgdm)
  std::vector<double> v;         // EMA of squared gradients
  std::vector<double> v_hat;     // running max of v (amsgrad / amsbound)
  std::vector<double> g_sum_sq;  // cumulative squared gradients (adagrad)

  // Scratch from the most recent step; not part of the serialized record.
  std::vector<double> rate_predecay;   // clipped per-coordinate rate before the 1/sqrt(t) decay
  std::vector<double> rate_effective;  // rate actually multiplied into the update
  double beta1_product = 1.0;          // prod_{i<=t} beta1_i, for bias correction
};

// State sized for cfg.method with x = x1 (must lie inside the box). Only the
// accumulators the method uses are allocated.
OptimizerState init_state(const OptimizerConfig& cfg, std::span<const double> x1,
                          const FeasibleBox& box);

// One online step: consume the gradient of f_t at the current iterate,
// advance t, update moments, compute the (possibly clipped) per-coordinate
// rates, move, and clamp back into the box.
void step(OptimizerState& state, const OptimizerConfig& cfg, std::span<const double> grad,
          const FeasibleBox& box);

// Effective per-coordinate learning rate used by the most recent step.
std::vector<double> learning_rates(const OptimizerState& state, const OptimizerConfig& cfg);

}  // namespace boundopt
