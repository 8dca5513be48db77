#include "optimizers.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace boundopt {

const char* method_name(Method m) {
  switch (m) {
    case Method::kSgd: return "sgd";
    case Method::kSgdm: return "sgdm";
    case Method::kAdaGrad: return "adagrad";
    case Method::kRmsProp: return "rmsprop";
    case Method::kAdam: return "adam";
    case Method::kAmsGrad: return "amsgrad";
    case Method::kAdaBound: return "adabound";
    case Method::kAmsBound: return "amsbound";
  }
  return "?";
}

Method method_from_name(std::string_view name) {
  if (name == "sgd") return Method::kSgd;
  if (name == "sgdm") return Method::kSgdm;
  if (name == "adagrad") return Method::kAdaGrad;
  if (name == "rmsprop") return Method::kRmsProp;
  if (name == "adam") return Method::kAdam;
  if (name == "amsgrad") return Method::kAmsGrad;
  if (name == "adabound") return Method::kAdaBound;
  if (name == "amsbound") return Method::kAmsBound;
  throw std::invalid_argument("optimizer: unknown method '" + std::string(name) + "'");
}

const char* beta1_schedule_name(Beta1Schedule s) {
  switch (s) {
    case Beta1Schedule::kConstant: return "constant";
    case Beta1Schedule::kLambdaDecay: return "lambda_decay";
    case Beta1Schedule::kOneOverT: return "one_over_t";
  }
  return "?";
}

Beta1Schedule beta1_schedule_from_name(std::string_view name) {
  if (name == "constant") return Beta1Schedule::kConstant;
  if (name == "lambda_decay") return Beta1Schedule::kLambdaDecay;
  if (name == "one_over_t") return Beta1Schedule::kOneOverT;
  throw std::invalid_argument("optimizer: unknown beta1 schedule '" + std::string(name) + "'");
}

const char* step_scheme_name(StepScheme s) {
  return s == StepScheme::kDecreasing ? "decreasing" : "constant";
}

StepScheme step_scheme_from_name(std::string_view name) {
  if (name == "decreasing") return StepScheme::kDecreasing;
  if (name == "constant") return StepScheme::kConstant;
  throw std::invalid_argument("optimizer: unknown step scheme '" + std::string(name) + "'");
}

double OptimizerConfig::effective_epsilon() const {
  if (epsilon != kEpsilonAuto) return epsilon;
  switch (method) {
    case Method::kAdaGrad:
    case Method::kRmsProp:
    case Method::kAdam:
    case Method::kAmsGrad:
      return 1e-8;
    case Method::kAdaBound:
    case Method::kAmsBound:
      return bound.form() == BoundForm::kAdamUnbounded ? 1e-8 : 0.0;
    case Method::kSgd:
    case Method::kSgdm:
      return 0.0;
  }
  return 0.0;
}

bool OptimizerConfig::is_bounded_method() const {
  return method == Method::kAdaBound || method == Method::kAmsBound;
}

bool OptimizerConfig::uses_first_moment() const {
  switch (method) {
    case Method::kAdam:
    case Method::kAmsGrad:
    case Method::kAdaBound:
    case Method::kAmsBound:
      return true;
    default:
      return false;
  }
}

bool OptimizerConfig::uses_second_moment() const {
  switch (method) {
    case Method::kRmsProp:
    case Method::kAdam:
    case Method::kAmsGrad:
    case Method::kAdaBound:
    case Method::kAmsBound:
      return true;
    default:
      return false;
  }
}

void OptimizerConfig::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("optimizer: alpha must be positive and finite");
  if (!(beta1 >= 0.0 && beta1 < 1.0))
    throw std::invalid_argument("optimizer: beta1 must lie in [0, 1)");
  if (!(beta2 >= 0.0 && beta2 < 1.0))
    throw std::invalid_argument("optimizer: beta2 must lie in [0, 1)");
  if (beta1_schedule == Beta1Schedule::kLambdaDecay && !(lambda > 0.0 && lambda < 1.0))
    throw std::invalid_argument("optimizer: lambda must lie in (0, 1)");
  if (epsilon != kEpsilonAuto && (!(epsilon >= 0.0) || !std::isfinite(epsilon)))
    throw std::invalid_argument("optimizer: epsilon must be >= 0");
  if (method == Method::kSgdm && !(momentum_gamma >= 0.0 && momentum_gamma < 1.0))
    throw std::invalid_argument("optimizer: momentum must lie in [0, 1)");
}

std::string OptimizerConfig::hyperparameter_warning() const {
  if (is_bounded_method() && !(beta1 < std::sqrt(beta2))) {
    return "beta1 = " + std::to_string(beta1) + " is not below sqrt(beta2) = " +
           std::to_string(std::sqrt(beta2)) + "; the convergence guarantee assumes beta1 < sqrt(beta2)";
  }
  return {};
}

double beta1_at(const OptimizerConfig& cfg, int64_t t) {
  if (t < 1) throw std::invalid_argument("beta1_at: step index must be >= 1");
  switch (cfg.beta1_schedule) {
    case Beta1Schedule::kConstant:
      return cfg.beta1;
    case Beta1Schedule::kLambdaDecay:
      return cfg.beta1 * std::pow(cfg.lambda, static_cast<double>(t - 1));
    case Beta1Schedule::kOneOverT:
      return cfg.beta1 / static_cast<double>(t);
  }
  throw std::logic_error("beta1_at: unknown schedule");
}

OptimizerState init_state(const OptimizerConfig& cfg, std::span<const double> x1,
                          const FeasibleBox& box) {
  cfg.validate();
  if (x1.size() != box.dim()) throw std::invalid_argument("init_state: x1 dimension mismatch");
  if (!box.contains(x1)) throw std::invalid_argument("init_state: x1 lies outside the feasible box");
  const size_t d = x1.size();
  OptimizerState s;
  s.x.assign(x1.begin(), x1.end());
  if (cfg.uses_first_moment() || cfg.method == Method::kSgdm) s.m.assign(d, 0.0);
  if (cfg.uses_second_moment()) s.v.assign(d, 0.0);
  if (cfg.method == Method::kAmsGrad || cfg.method == Method::kAmsBound) s.v_hat.assign(d, 0.0);
  if (cfg.method == Method::kAdaGrad) s.g_sum_sq.assign(d, 0.0);
  return s;
}

namespace {

void check_gradient(std::span<const double> grad, size_t d) {
  if (grad.size() != d) throw std::invalid_argument("step: gradient dimension mismatch");
  for (double g : grad)
    if (!std::isfinite(g)) throw std::invalid_argument("step: gradient must be finite");
}

}  // namespace

void step(OptimizerState& state, const OptimizerConfig& cfg, std::span<const double> grad,
          const FeasibleBox& box) {
  const size_t d = state.x.size();
  if (box.dim() != d) throw std::invalid_argument("step: box dimension mismatch");
  check_gradient(grad, d);

  state.t += 1;
  const int64_t t = state.t;
  const double sqrt_t = std::sqrt(static_cast<double>(t));
  const double eps = cfg.effective_epsilon();

  // Moment updates.
  switch (cfg.method) {
    case Method::kSgd:
      break;
    case Method::kSgdm:
      for (size_t i = 0; i < d; ++i) state.m[i] = cfg.momentum_gamma * state.m[i] + grad[i];
      break;
    case Method::kAdaGrad:
      for (size_t i = 0; i < d; ++i) state.g_sum_sq[i] += grad[i] * grad[i];
      break;
    case Method::kRmsProp:
      for (size_t i = 0; i < d; ++i)
        state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * grad[i] * grad[i];
      break;
    case Method::kAdam:
    case Method::kAmsGrad:
    case Method::kAdaBound:
    case Method::kAmsBound: {
      const double b1 = beta1_at(cfg, t);
      state.beta1_product *= b1;
      for (size_t i = 0; i < d; ++i) {
        state.m[i] = b1 * state.m[i] + (1.0 - b1) * grad[i];
        state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * grad[i] * grad[i];
      }
      if (cfg.method == Method::kAmsGrad || cfg.method == Method::kAmsBound) {
        // Ties keep the stored maximum.
        for (size_t i = 0; i < d; ++i)
          if (state.v[i] > state.v_hat[i]) state.v_hat[i] = state.v[i];
      }
      break;
    }
  }

  // Rate bounds: the configured schedule for the bounded methods, the trivial
  // [0, kRateInfinity] band (a bit-exact identity on finite rates) otherwise.
  double lo = 0.0, hi = kRateInfinity;
  if (cfg.is_bounded_method()) {
    lo = cfg.bound.eta_lower(t);
    hi = cfg.bound.eta_upper(t);
  }

  // Bias correction denominators (adam family only, opt-in).
  const bool correct = cfg.bias_correction && cfg.uses_first_moment();
  const double m_corr = correct ? 1.0 - state.beta1_product : 1.0;
  const double v_corr = correct ? 1.0 - std::pow(cfg.beta2, static_cast<double>(t)) : 1.0;

  state.rate_predecay.resize(d);
  state.rate_effective.resize(d);

  for (size_t i = 0; i < d; ++i) {
    // Direction the step moves along.
    double mstep;
    switch (cfg.method) {
      case Method::kSgd:
      case Method::kAdaGrad:
      case Method::kRmsProp:
        mstep = grad[i];
        break;
      case Method::kSgdm:
        mstep = state.m[i];
        break;
      default:
        mstep = correct ? state.m[i] / m_corr : state.m[i];
        break;
    }

    // Raw per-coordinate rate. A zero denominator with eps = 0 divides to
    // +infinity, which the clip resolves (to eta_upper, or to kRateInfinity
    // for the unbounded band; the latter only happens while mstep is 0).
    double raw = 0.0;
    switch (cfg.method) {
      case Method::kSgd:
      case Method::kSgdm:
        raw = cfg.alpha;
        break;
      case Method::kAdaGrad:
        raw = cfg.alpha / (std::sqrt(state.g_sum_sq[i] / static_cast<double>(t)) + eps);
        break;
      case Method::kRmsProp:
      case Method::kAdam:
        raw = cfg.alpha / (std::sqrt(correct ? state.v[i] / v_corr : state.v[i]) + eps);
        break;
      case Method::kAmsGrad:
        raw = cfg.alpha / (std::sqrt(correct ? state.v_hat[i] / v_corr : state.v_hat[i]) + eps);
        break;
      case Method::kAdaBound:
        raw = cfg.alpha / (std::sqrt(correct ? state.v[i] / v_corr : state.v[i]) + eps);
        break;
      case Method::kAmsBound:
        raw = cfg.alpha / (std::sqrt(correct ? state.v_hat[i] / v_corr : state.v_hat[i]) + eps);
        break;
    }

    const double pre = clip_rate(raw, lo, hi);
    const double eff = cfg.step_scheme == StepScheme::kDecreasing ? pre / sqrt_t : pre;
    state.rate_predecay[i] = pre;
    state.rate_effective[i] = eff;
    state.x[i] = box.clamp1(i, state.x[i] - eff * mstep);
  }
}

std::vector<double> learning_rates(const OptimizerState& state, const OptimizerConfig&) {
  if (state.t < 1) throw std::logic_error("learning_rates: no step has been taken yet");
  return state.rate_effective;
}

}  // namespace boundopt
