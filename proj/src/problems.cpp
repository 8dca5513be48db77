#include "problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "optimizers.hpp"

namespace boundopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Lane layout for counter-based draws, one block per purpose so streams never
// collide. Instance-level data uses t = 0.
constexpr uint64_t kLaneThm3Draw = 0;
constexpr uint64_t kLaneLinearCoeff = 1000;     // + coordinate
constexpr uint64_t kLaneQuadCenter = 2000;      // + coordinate
constexpr uint64_t kLaneQuadDiag = 3000;        // + coordinate (t = 0)
constexpr uint64_t kLaneLogitScale = 4000;      // + coordinate (t = 0)
constexpr uint64_t kLaneLogitTruth = 5000;      // + coordinate (t = 0)
constexpr uint64_t kLaneLogitFeature = 6000;    // + coordinate (t = sample index + 1)
constexpr uint64_t kLaneLogitFlip = 7000;       // (t = sample index + 1)
constexpr uint64_t kLaneLogitPick = 8000;       // (t = step)

double softplus(double u) {
  // log(1 + exp(u)) without overflow.
  if (u > 0.0) return u + std::log1p(std::exp(-u));
  return std::log1p(std::exp(u));
}

double sigmoid(double u) {
  if (u >= 0.0) return 1.0 / (1.0 + std::exp(-u));
  const double e = std::exp(u);
  return e / (1.0 + e);
}

}  // namespace

const char* problem_kind_name(ProblemKind k) {
  switch (k) {
    case ProblemKind::kThm1Adversary: return "thm1_adversary";
    case ProblemKind::kThm2Adversary: return "thm2_adversary";
    case ProblemKind::kThm3Stochastic: return "thm3_stochastic";
    case ProblemKind::kQuadratic: return "quadratic";
    case ProblemKind::kLogistic: return "logistic";
    case ProblemKind::kLinearRandom: return "linear_random";
  }
  return "?";
}

ProblemKind problem_kind_from_name(std::string_view name) {
  if (name == "thm1_adversary") return ProblemKind::kThm1Adversary;
  if (name == "thm2_adversary") return ProblemKind::kThm2Adversary;
  if (name == "thm3_stochastic") return ProblemKind::kThm3Stochastic;
  if (name == "quadratic") return ProblemKind::kQuadratic;
  if (name == "logistic") return ProblemKind::kLogistic;
  if (name == "linear_random") return ProblemKind::kLinearRandom;
  throw std::invalid_argument("problem: unknown kind '" + std::string(name) + "'");
}

int64_t derive_cycle_length_thm1(double beta2) {
  if (!(beta2 > 0.0 && beta2 < 1.0))
    throw std::invalid_argument("derive_cycle_length_thm1: beta2 must lie in (0, 1)");
  const double rhs = (1.0 - beta2) / (4.0 - beta2);
  // Scan C = 3, 4, ... keeping beta2^(C-2) incrementally.
  double pw = beta2;  // beta2^(C-2) at C = 3
  for (int64_t c = 3; c <= 2'000'000'000; ++c) {
    if (5.0 * pw <= rhs) return c;
    pw *= beta2;
  }
  throw std::runtime_error("derive_cycle_length_thm1: no cycle length found (beta2 too close to 1)");
}

bool thm2_conditions_hold(double beta1, double beta2, int64_t cycle) {
  if (!(beta2 > 0.0 && beta2 < 1.0))
    throw std::invalid_argument("thm2_conditions_hold: beta2 must lie in (0, 1)");
  if (!(beta1 >= 0.0 && beta1 < 1.0))
    throw std::invalid_argument("thm2_conditions_hold: beta1 must lie in [0, 1)");
  const double gamma = beta1 / std::sqrt(beta2);
  if (!(gamma < 1.0))
    throw std::invalid_argument("thm2_conditions_hold: requires beta1 < sqrt(beta2)");
  if (cycle < 2 || cycle % 2 != 0) return false;
  const double c = static_cast<double>(cycle);

  const double b1_pow_cm1 = std::pow(beta1, c - 1.0);
  const bool cond1 = (1.0 - beta1) * b1_pow_cm1 * c <= 1.0 - b1_pow_cm1;

  const bool cond2 = std::pow(beta2, (c - 2.0) / 2.0) * c * c <= 1.0;

  // gamma (1 - gamma^(C-1)) / (1 - gamma); the beta1 = 0 edge gives 0.
  const double tail = gamma == 0.0 ? 0.0 : gamma * (1.0 - std::pow(gamma, c - 1.0)) / (1.0 - gamma);
  const double lhs3 = 3.0 * (1.0 - beta1) / (2.0 * std::sqrt(1.0 - beta2)) * (1.0 + tail) +
                      std::pow(beta1, c / 2.0 - 1.0) / (1.0 - beta1);
  const bool cond3 = lhs3 < c / 3.0;

  return cond1 && cond2 && cond3;
}

int64_t derive_cycle_length_thm2(double beta1, double beta2) {
  for (int64_t c = 2; c <= 100'000'000; c += 2) {
    if (thm2_conditions_hold(beta1, beta2, c)) return c;
  }
  throw std::runtime_error("derive_cycle_length_thm2: no cycle length found");
}

ProblemInstance::ProblemInstance(ProblemKind kind, FeasibleBox box, uint64_t seed)
    : kind_(kind), box_(std::move(box)), rng_(seed) {}

ProblemInstance ProblemInstance::thm1_adversary(int64_t cycle) {
  if (cycle < 3) throw std::invalid_argument("thm1_adversary: cycle length must be >= 3");
  ProblemInstance p(ProblemKind::kThm1Adversary, FeasibleBox::bounds(1, -2.0, 2.0), 0);
  p.cycle_ = cycle;
  return p;
}

ProblemInstance ProblemInstance::thm2_adversary(int64_t cycle) {
  if (cycle < 2 || cycle % 2 != 0)
    throw std::invalid_argument("thm2_adversary: cycle length must be even and >= 2");
  ProblemInstance p(ProblemKind::kThm2Adversary, FeasibleBox::bounds(1, -1.0, 1.0), 0);
  p.cycle_ = cycle;
  return p;
}

ProblemInstance ProblemInstance::thm3_stochastic(int64_t cycle, double delta, uint64_t seed) {
  if (cycle < 2) throw std::invalid_argument("thm3_stochastic: cycle parameter must be >= 2");
  if (!(delta >= 0.0 && delta < 1.0))
    throw std::invalid_argument("thm3_stochastic: delta must lie in [0, 1)");
  ProblemInstance p(ProblemKind::kThm3Stochastic, FeasibleBox::bounds(1, -1.0, 1.0), seed);
  p.cycle_ = cycle;
  p.delta_ = delta;
  return p;
}

ProblemInstance ProblemInstance::quadratic(size_t dim, FeasibleBox box, uint64_t seed) {
  if (box.dim() != dim) throw std::invalid_argument("quadratic: box dimension mismatch");
  ProblemInstance p(ProblemKind::kQuadratic, std::move(box), seed);
  p.quad_diag_.resize(dim);
  for (size_t i = 0; i < dim; ++i)
    p.quad_diag_[i] = p.rng_.uniform(0, kLaneQuadDiag + i, 0.5, 2.5);
  return p;
}

ProblemInstance ProblemInstance::quadratic_fixed(std::vector<double> diag,
                                                 std::vector<double> center, FeasibleBox box) {
  if (diag.size() != box.dim() || center.size() != box.dim())
    throw std::invalid_argument("quadratic_fixed: dimension mismatch");
  for (double d : diag)
    if (!(d > 0.0)) throw std::invalid_argument("quadratic_fixed: curvature must be positive");
  ProblemInstance p(ProblemKind::kQuadratic, std::move(box), 0);
  p.quad_diag_ = std::move(diag);
  p.quad_fixed_center_ = std::move(center);
  return p;
}

ProblemInstance ProblemInstance::logistic(size_t dim, int64_t pool_size, FeasibleBox box,
                                          uint64_t seed) {
  if (box.dim() != dim) throw std::invalid_argument("logistic: box dimension mismatch");
  if (!box.bounded()) throw std::invalid_argument("logistic: requires a bounded box");
  if (pool_size < 1) throw std::invalid_argument("logistic: pool size must be >= 1");
  ProblemInstance p(ProblemKind::kLogistic, std::move(box), seed);
  p.pool_size_ = pool_size;
  p.logit_features_.resize(static_cast<size_t>(pool_size) * dim);
  p.logit_labels_.resize(pool_size);

  // Heterogeneous per-coordinate feature scales plus a hidden separator; 10%
  // of labels are flipped so the pooled optimum stays interior-ish.
  std::vector<double> scale(dim), truth(dim);
  for (size_t i = 0; i < dim; ++i) {
    scale[i] = p.rng_.uniform(0, kLaneLogitScale + i, 0.1, 1.0);
    truth[i] = p.rng_.uniform(0, kLaneLogitTruth + i, -1.0, 1.0);
  }
  for (int64_t j = 0; j < pool_size; ++j) {
    double dot = 0.0;
    for (size_t i = 0; i < dim; ++i) {
      const double a = scale[i] * p.rng_.uniform(j + 1, kLaneLogitFeature + i, -1.0, 1.0);
      p.logit_features_[static_cast<size_t>(j) * dim + i] = a;
      dot += a * truth[i];
    }
    double y = dot >= 0.0 ? 1.0 : -1.0;
    if (p.rng_.uniform01(j + 1, kLaneLogitFlip) < 0.1) y = -y;
    p.logit_labels_[j] = y;
  }
  return p;
}

ProblemInstance ProblemInstance::linear_random(size_t dim, FeasibleBox box, uint64_t seed,
                                               double coeff_bound) {
  if (box.dim() != dim) throw std::invalid_argument("linear_random: box dimension mismatch");
  if (!box.bounded()) throw std::invalid_argument("linear_random: requires a bounded box");
  if (!(coeff_bound > 0.0) || !std::isfinite(coeff_bound))
    throw std::invalid_argument("linear_random: coefficient bound must be positive and finite");
  ProblemInstance p(ProblemKind::kLinearRandom, std::move(box), seed);
  p.coeff_bound_ = coeff_bound;
  return p;
}

double ProblemInstance::bernoulli_p() const {
  if (kind_ != ProblemKind::kThm3Stochastic)
    throw std::logic_error("bernoulli_p: only defined for the stochastic adversary");
  return (1.0 + delta_) / (static_cast<double>(cycle_) + 1.0);
}

std::vector<double> ProblemInstance::linear_coeffs(int64_t t) const {
  std::vector<double> a(dim());
  for (size_t i = 0; i < dim(); ++i)
    a[i] = rng_.uniform(t, kLaneLinearCoeff + i, -coeff_bound_, coeff_bound_);
  return a;
}

std::vector<double> ProblemInstance::quadratic_center(int64_t t) const {
  if (quad_fixed_center_) return *quad_fixed_center_;
  std::vector<double> c(dim());
  for (size_t i = 0; i < dim(); ++i) c[i] = rng_.uniform(t, kLaneQuadCenter + i, -1.0, 1.0);
  return c;
}

size_t ProblemInstance::logistic_index(int64_t t) const {
  return static_cast<size_t>(rng_.word(t, kLaneLogitPick) % static_cast<uint64_t>(pool_size_));
}

std::span<const double> ProblemInstance::logistic_feature(size_t j) const {
  return std::span<const double>(logit_features_.data() + j * dim(), dim());
}

StepOutcome ProblemInstance::eval(int64_t t, std::span<const double> x) const {
  if (t < 1) throw std::invalid_argument("problem eval: step index must be >= 1");
  if (x.size() != dim()) throw std::invalid_argument("problem eval: point dimension mismatch");

  StepOutcome out;
  out.t = t;
  out.grad.assign(dim(), 0.0);

  switch (kind_) {
    case ProblemKind::kThm1Adversary:
    case ProblemKind::kThm2Adversary:
    case ProblemKind::kThm3Stochastic:
      if (!box_.contains(x))
        throw std::invalid_argument("problem eval: point outside the feasible box");
      break;
    default:
      break;
  }

  switch (kind_) {
    case ProblemKind::kThm1Adversary: {
      const double x1 = x[0];
      const int64_t r = t % cycle_;
      if (x1 < 0.0) {
        out.loss = -100.0;
      } else if (x1 > 1.0) {
        out.loss = 0.0;
      } else if (r == 1) {
        out.loss = -x1;
        out.grad[0] = -1.0;
      } else if (r == 2) {
        out.loss = 2.0 * x1;
        out.grad[0] = 2.0;
      } else {
        out.loss = 0.0;
      }
      break;
    }
    case ProblemKind::kThm2Adversary: {
      const double coeff = (t % cycle_ == 1) ? static_cast<double>(cycle_) : -1.0;
      out.loss = coeff * x[0];
      out.grad[0] = coeff;
      break;
    }
    case ProblemKind::kThm3Stochastic: {
      const bool rare = rng_.uniform01(t, kLaneThm3Draw) < bernoulli_p();
      const double coeff = rare ? static_cast<double>(cycle_) : -1.0;
      out.loss = coeff * x[0];
      out.grad[0] = coeff;
      out.draw = rare ? 1 : 0;
      break;
    }
    case ProblemKind::kQuadratic: {
      const std::vector<double> c = quadratic_center(t);
      double loss = 0.0;
      for (size_t i = 0; i < dim(); ++i) {
        const double r = x[i] - c[i];
        loss += 0.5 * quad_diag_[i] * r * r;
        out.grad[i] = quad_diag_[i] * r;
      }
      out.loss = loss;
      break;
    }
    case ProblemKind::kLogistic: {
      const size_t j = logistic_index(t);
      const std::span<const double> a = logistic_feature(j);
      const double y = logit_labels_[j];
      double z = 0.0;
      for (size_t i = 0; i < dim(); ++i) z += a[i] * x[i];
      out.loss = softplus(-y * z);
      const double s = -y * sigmoid(-y * z);
      for (size_t i = 0; i < dim(); ++i) out.grad[i] = s * a[i];
      break;
    }
    case ProblemKind::kLinearRandom: {
      const std::vector<double> a = linear_coeffs(t);
      double loss = 0.0;
      for (size_t i = 0; i < dim(); ++i) {
        loss += a[i] * x[i];
        out.grad[i] = a[i];
      }
      out.loss = loss;
      break;
    }
  }
  return out;
}

ProblemInstance::BaselineTracker::BaselineTracker(const ProblemInstance* p) : p_(p) {
  switch (p_->kind()) {
    case ProblemKind::kThm2Adversary:
    case ProblemKind::kThm3Stochastic:
    case ProblemKind::kLinearRandom:
      coeff_sum_.assign(p_->dim(), 0.0);
      break;
    case ProblemKind::kQuadratic:
      center_sum_.assign(p_->dim(), 0.0);
      break;
    case ProblemKind::kLogistic:
      counts_.assign(p_->pool_size_, 0);
      warm_.assign(p_->dim(), 0.0);
      p_->box().clamp(warm_);
      break;
    default:
      break;
  }
}

void ProblemInstance::BaselineTracker::observe(int64_t t) {
  if (t != n_ + 1)
    throw std::logic_error("baseline tracker: steps must be observed sequentially from 1");
  n_ = t;
  switch (p_->kind()) {
    case ProblemKind::kThm1Adversary:
      break;
    case ProblemKind::kThm2Adversary: {
      coeff_sum_[0] += (t % p_->cycle_ == 1) ? static_cast<double>(p_->cycle_) : -1.0;
      break;
    }
    case ProblemKind::kThm3Stochastic: {
      const bool rare = p_->rng_.uniform01(t, kLaneThm3Draw) < p_->bernoulli_p();
      coeff_sum_[0] += rare ? static_cast<double>(p_->cycle_) : -1.0;
      break;
    }
    case ProblemKind::kLinearRandom: {
      const std::vector<double> a = p_->linear_coeffs(t);
      for (size_t i = 0; i < a.size(); ++i) coeff_sum_[i] += a[i];
      break;
    }
    case ProblemKind::kQuadratic: {
      const std::vector<double> c = p_->quadratic_center(t);
      double q = 0.0;
      for (size_t i = 0; i < c.size(); ++i) {
        center_sum_[i] += c[i];
        q += 0.5 * p_->quad_diag_[i] * c[i] * c[i];
      }
      center_quad_sum_ += q;
      break;
    }
    case ProblemKind::kLogistic: {
      counts_[p_->logistic_index(t)] += 1;
      break;
    }
  }
}

double ProblemInstance::BaselineTracker::best_fixed() const {
  if (n_ < 1) throw std::logic_error("baseline tracker: nothing observed yet");
  const size_t d = p_->dim();
  switch (p_->kind()) {
    case ProblemKind::kThm1Adversary:
      // f_t = -100 everywhere left of 0; nothing beats sitting there.
      return -100.0 * static_cast<double>(n_);
    case ProblemKind::kThm2Adversary:
    case ProblemKind::kThm3Stochastic:
    case ProblemKind::kLinearRandom: {
      // Accumulated losses are linear: best endpoint per coordinate.
      double best = 0.0;
      for (size_t i = 0; i < d; ++i)
        best += std::min(coeff_sum_[i] * p_->box().lo(i), coeff_sum_[i] * p_->box().hi(i));
      return best;
    }
    case ProblemKind::kQuadratic: {
      // Diagonal curvature: the box-constrained minimizer is the clamped
      // mean center, and the value follows from the running sums.
      const double n = static_cast<double>(n_);
      double value = center_quad_sum_;
      for (size_t i = 0; i < d; ++i) {
        const double xi = p_->box().clamp1(i, center_sum_[i] / n);
        value += 0.5 * p_->quad_diag_[i] * n * xi * xi - p_->quad_diag_[i] * xi * center_sum_[i];
      }
      return value;
    }
    case ProblemKind::kLogistic: {
      // Histogram-weighted pooled loss, minimized by cyclic coordinate
      // descent with a bisection-safeguarded Newton step per coordinate
      // (documented tolerance 1e-10), warm-started from the previous query.
      const int64_t pool = p_->pool_size_;
      std::vector<double> x = warm_;
      std::vector<double> z(static_cast<size_t>(pool), 0.0);
      for (int64_t j = 0; j < pool; ++j) {
        const std::span<const double> a = p_->logistic_feature(static_cast<size_t>(j));
        double dot = 0.0;
        for (size_t i = 0; i < d; ++i) dot += a[i] * x[i];
        z[static_cast<size_t>(j)] = dot;
      }

      for (int sweep = 0; sweep < 100; ++sweep) {
        double moved = 0.0;
        for (size_t i = 0; i < d; ++i) {
          const double xi0 = x[i];
          // First and second derivative in coordinate i at offset position t.
          const auto deriv = [&](double t) {
            double d1 = 0.0, d2 = 0.0;
            for (int64_t j = 0; j < pool; ++j) {
              const int64_t cnt = counts_[static_cast<size_t>(j)];
              if (cnt == 0) continue;
              const double aji = p_->logit_features_[static_cast<size_t>(j) * d + i];
              const double y = p_->logit_labels_[static_cast<size_t>(j)];
              const double s = sigmoid(-y * (z[static_cast<size_t>(j)] + aji * (t - xi0)));
              d1 += static_cast<double>(cnt) * (-y * aji) * s;
              d2 += static_cast<double>(cnt) * aji * aji * s * (1.0 - s);
            }
            return std::pair<double, double>(d1, d2);
          };

          double lo = p_->box().lo(i), hi = p_->box().hi(i);
          double t;
          if (deriv(lo).first >= 0.0) {
            t = lo;  // increasing from the left edge
          } else if (deriv(hi).first <= 0.0) {
            t = hi;  // decreasing into the right edge
          } else {
            t = std::min(hi, std::max(lo, xi0));
            for (int it = 0; it < 200; ++it) {
              const auto [d1, d2] = deriv(t);
              if (d1 == 0.0) break;
              (d1 < 0.0 ? lo : hi) = t;
              double nt = d2 > 0.0 ? t - d1 / d2 : 0.5 * (lo + hi);
              if (!(nt > lo && nt < hi)) nt = 0.5 * (lo + hi);
              const double tol = 1e-13 * std::max(1.0, std::abs(nt));
              if (std::abs(nt - t) <= tol || hi - lo <= tol) {
                t = nt;
                break;
              }
              t = nt;
            }
          }
          if (t != xi0) {
            for (int64_t j = 0; j < pool; ++j)
              z[static_cast<size_t>(j)] +=
                  p_->logit_features_[static_cast<size_t>(j) * d + i] * (t - xi0);
            x[i] = t;
          }
          moved = std::max(moved, std::abs(t - xi0));
        }
        if (moved < 1e-11) break;
      }
      warm_ = x;

      double total = 0.0;
      for (int64_t j = 0; j < pool; ++j) {
        const int64_t cnt = counts_[static_cast<size_t>(j)];
        if (cnt == 0) continue;
        const std::span<const double> a = p_->logistic_feature(static_cast<size_t>(j));
        double dot = 0.0;
        for (size_t i = 0; i < d; ++i) dot += a[i] * x[i];
        total += static_cast<double>(cnt) * softplus(-p_->logit_labels_[static_cast<size_t>(j)] * dot);
      }
      return total;
    }
  }
  throw std::logic_error("baseline tracker: unknown kind");
}

double ProblemInstance::best_fixed_loss(int64_t T) const {
  if (T < 1) throw std::invalid_argument("best_fixed_loss: horizon must be >= 1");
  BaselineTracker tr(this);
  for (int64_t t = 1; t <= T; ++t) tr.observe(t);
  return tr.best_fixed();
}

double ProblemInstance::gradient_norm_bound(int64_t T) const {
  if (T < 1) throw std::invalid_argument("gradient_norm_bound: horizon must be >= 1");
  switch (kind_) {
    case ProblemKind::kThm1Adversary:
      return 2.0;
    case ProblemKind::kThm2Adversary:
    case ProblemKind::kThm3Stochastic:
      return static_cast<double>(cycle_);
    case ProblemKind::kLinearRandom: {
      double best = 0.0;
      for (int64_t t = 1; t <= T; ++t) {
        const std::vector<double> a = linear_coeffs(t);
        double s = 0.0;
        for (double ai : a) s += ai * ai;
        best = std::max(best, s);
      }
      return std::sqrt(best);
    }
    case ProblemKind::kQuadratic: {
      if (!box_.bounded()) return kInf;
      const double cmax = quad_fixed_center_ ? [&] {
        double m = 0.0;
        for (double c : *quad_fixed_center_) m = std::max(m, std::abs(c));
        return m;
      }() : 1.0;
      double s = 0.0;
      for (size_t i = 0; i < dim(); ++i) {
        const double reach = std::max(std::abs(box_.lo(i)), std::abs(box_.hi(i))) + cmax;
        s += quad_diag_[i] * quad_diag_[i] * reach * reach;
      }
      return std::sqrt(s);
    }
    case ProblemKind::kLogistic: {
      double best = 0.0;
      for (int64_t j = 0; j < pool_size_; ++j) {
        const std::span<const double> a = logistic_feature(j);
        double s = 0.0;
        for (double ai : a) s += ai * ai;
        best = std::max(best, s);
      }
      return std::sqrt(best);
    }
  }
  throw std::logic_error("gradient_norm_bound: unknown kind");
}

std::vector<double> finite_diff_grad(const ProblemInstance& problem, std::span<const double> x,
                                     int64_t t, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite_diff_grad: h must be positive");
  if (x.size() != problem.dim())
    throw std::invalid_argument("finite_diff_grad: point dimension mismatch");
  std::vector<double> shifted(x.begin(), x.end());
  std::vector<double> grad(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    shifted[i] = x[i] + h;
    if (!problem.box().contains(shifted))
      throw std::invalid_argument("finite_diff_grad: shifted point leaves the feasible box");
    const double fp = problem.eval(t, shifted).loss;
    shifted[i] = x[i] - h;
    if (!problem.box().contains(shifted))
      throw std::invalid_argument("finite_diff_grad: shifted point leaves the feasible box");
    const double fm = problem.eval(t, shifted).loss;
    shifted[i] = x[i];
    grad[i] = (fp - fm) / (2.0 * h);
  }
  return grad;
}

std::pair<double, double> regret_of_trace(std::span<const double> losses, double baseline) {
  if (losses.empty()) throw std::invalid_argument("regret_of_trace: empty loss sequence");
  double cum = 0.0;
  for (double l : losses) cum += l;
  const double regret = cum - baseline;
  return {regret, regret / static_cast<double>(losses.size())};
}

const Thm3Fixture& thm3_committed_fixture() {
  // Frozen output of scan_thm3_fixture(0.9, 0.9, 0.001, {1..10}, 1000),
  // which settles on the smallest candidate cycle. beta2 = 0.9 keeps the
  // EMA horizon shorter than the mean rare-draw gap (1 + 1/p ~ 11 steps),
  // so the rare large gradient is mostly forgotten by the time the next one
  // arrives and the common -1 gradients dominate the adaptive step. The sgd
  // step size keeps the hover band around the clamped optimum narrow:
  // one rare kick moves C * 3e-4 ~ 0.003, about one mean gap of climb.
  static const Thm3Fixture fixture{
      /*cycle=*/11,
      /*delta=*/0.1,
      /*beta1=*/0.9,
      /*beta2=*/0.9,
      /*adam_alpha=*/0.001,
      /*sgd_alpha=*/3e-4,
      /*seeds=*/{1, 2, 3, 4, 5, 6, 7, 8, 9, 10},
  };
  return fixture;
}

std::optional<std::pair<int64_t, double>> scan_thm3_fixture(double beta1, double beta2,
                                                            double alpha,
                                                            std::span<const uint64_t> seeds,
                                                            int64_t probe_steps) {
  const int64_t cycles[] = {11, 101, 1001, 10001};
  const double deltas[] = {0.1, 0.02};
  for (int64_t cycle : cycles) {
    for (double delta : deltas) {
      double mean_displacement = 0.0;
      for (uint64_t seed : seeds) {
        const ProblemInstance problem = ProblemInstance::thm3_stochastic(cycle, delta, seed);
        OptimizerConfig cfg;
        cfg.method = Method::kAdam;
        cfg.alpha = alpha;
        cfg.beta1 = beta1;
        cfg.beta2 = beta2;
        cfg.step_scheme = StepScheme::kConstant;
        const std::vector<double> x1{0.0};
        OptimizerState state = init_state(cfg, x1, problem.box());
        for (int64_t t = 1; t <= probe_steps; ++t)
          step(state, cfg, problem.eval(t, state.x).grad, problem.box());
        mean_displacement += state.x[0];
      }
      mean_displacement /= static_cast<double>(seeds.size());
      if (mean_displacement > 0.0) return std::make_pair(cycle, delta);
    }
  }
  return std::nullopt;
}

}  // namespace boundopt
