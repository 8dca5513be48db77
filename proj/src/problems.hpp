#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "geometry.hpp"
#include "rng.hpp"

namespace boundopt {

enum class ProblemKind {
  kThm1Adversary,   // 1-D piecewise-linear cycle on [-2, 2] that traps uncorrected adaptive steps
  kThm2Adversary,   // 1-D linear cycle on [-1, 1] with momentum-defeating cycle length
  kThm3Stochastic,  // 1-D stochastic linear losses on [-1, 1], rare large positive slope
  kQuadratic,
  kLogistic,
  kLinearRandom,
};

const char* problem_kind_name(ProblemKind k);
ProblemKind problem_kind_from_name(std::string_view name);

struct StepOutcome {
  int64_t t = 0;
  double loss = 0.0;
  std::vector<double> grad;
  int draw = -1;  // stochastic kinds: 1 if the rare branch fired, 0 otherwise
};

// Smallest C >= 3 with 5 * beta2^(C-2) <= (1-beta2) / (4-beta2): the cycle
// length that makes the deterministic trap effective against beta1 = 0
// adaptive steps with the given beta2.
int64_t derive_cycle_length_thm1(double beta2);

// Verbatim evaluation of the three inequalities (gamma = beta1 / sqrt(beta2))
// a momentum-defeating cycle length C must satisfy:
//   (1-beta1) beta1^(C-1) C <= 1 - beta1^(C-1)
//   beta2^((C-2)/2) C^2 <= 1
//   3(1-beta1)/(2 sqrt(1-beta2)) (1 + gamma (1-gamma^(C-1))/(1-gamma))
//       + beta1^(C/2-1)/(1-beta1) < C/3
bool thm2_conditions_hold(double beta1, double beta2, int64_t cycle);

// Smallest even C satisfying all three conditions above, by direct scan.
// Requires beta1 < sqrt(beta2).
int64_t derive_cycle_length_thm2(double beta1, double beta2);

class ProblemInstance {
 public:
  static ProblemInstance thm1_adversary(int64_t cycle);
  static ProblemInstance thm2_adversary(int64_t cycle);
  static ProblemInstance thm3_stochastic(int64_t cycle, double delta, uint64_t seed);
  static ProblemInstance quadratic(size_t dim, FeasibleBox box, uint64_t seed);
  static ProblemInstance quadratic_fixed(std::vector<double> diag, std::vector<double> center,
                                         FeasibleBox box);
  static ProblemInstance logistic(size_t dim, int64_t pool_size, FeasibleBox box, uint64_t seed);
  static ProblemInstance linear_random(size_t dim, FeasibleBox box, uint64_t seed,
                                       double coeff_bound);

  ProblemKind kind() const { return kind_; }
  size_t dim() const { return box_.dim(); }
  const FeasibleBox& box() const { return box_; }
  int64_t cycle() const { return cycle_; }
  double delta() const { return delta_; }
  uint64_t seed() const { return rng_.seed(); }

  // Probability of the rare branch for the stochastic adversary:
  // p = (1 + delta) / (C + 1), so the expected loss is delta * x.
  double bernoulli_p() const;

  // Loss and gradient of f_t at x. Deterministic in (seed, t): stochastic
  // draws are reconstructible, so evaluation is pure.
  StepOutcome eval(int64_t t, std::span<const double> x) const;

  // min over the box of sum_{t<=T} f_t: the exact best-fixed-point baseline.
  double best_fixed_loss(int64_t T) const;

  // G2: max_{t<=T} of the l2 gradient norm over the box (exact for the linear
  // kinds, a safe upper bound for the smooth ones).
  double gradient_norm_bound(int64_t T) const;

  // Incremental prefix-baseline computation for the harness: observe steps in
  // order, query the exact baseline at the current prefix.
  class BaselineTracker {
   public:
    explicit BaselineTracker(const ProblemInstance* p);
    void observe(int64_t t);  // t must advance sequentially from 1
    double best_fixed() const;
    int64_t observed() const { return n_; }

   private:
    const ProblemInstance* p_;
    int64_t n_ = 0;
    std::vector<double> coeff_sum_;
    std::vector<double> center_sum_;
    double center_quad_sum_ = 0.0;
    std::vector<int64_t> counts_;
    mutable std::vector<double> warm_;
  };
  BaselineTracker baseline_tracker() const { return BaselineTracker(this); }

  // Per-step generated data (exposed for tests and G2 computation).
  std::vector<double> linear_coeffs(int64_t t) const;
  std::vector<double> quadratic_center(int64_t t) const;
  size_t logistic_index(int64_t t) const;
  std::span<const double> quadratic_diag() const { return quad_diag_; }
  std::span<const double> logistic_feature(size_t j) const;
  double logistic_label(size_t j) const { return logit_labels_[j]; }
  int64_t pool_size() const { return pool_size_; }

 private:
  ProblemInstance(ProblemKind kind, FeasibleBox box, uint64_t seed);

  ProblemKind kind_;
  FeasibleBox box_;
  CounterRng rng_;
  int64_t cycle_ = 0;
  double delta_ = 0.0;
  double coeff_bound_ = 1.0;
  int64_t pool_size_ = 0;
  std::vector<double> quad_diag_;
  std::optional<std::vector<double>> quad_fixed_center_;
  std::vector<double> logit_features_;  // pool_size x dim, row-major
  std::vector<double> logit_labels_;
};

// Central differences (f(x + h e_i) - f(x - h e_i)) / (2h). Both shifted
// points must stay inside the box.
std::vector<double> finite_diff_grad(const ProblemInstance& problem, std::span<const double> x,
                                     int64_t t, double h);

// (R_T, R_T / T) for a realized loss sequence against a baseline.
std::pair<double, double> regret_of_trace(std::span<const double> losses, double baseline);

// Committed configuration for the stochastic-adversary demonstration: cycle
// length and delta found by the scan below, the optimizer settings the scan
// ran with, and the frozen seeds.
struct Thm3Fixture {
  int64_t cycle;
  double delta;
  double beta1;
  double beta2;
  double adam_alpha;
  double sgd_alpha;
  std::array<uint64_t, 10> seeds;
};
const Thm3Fixture& thm3_committed_fixture();

// The scan that produced the committed fixture, kept executable: walk C over
// {11, 101, 1001, 10001} and delta over {0.1, 0.02}, return the first pair
// for which the adam configuration's mean displacement over the first
// probe_steps steps is positive across the given seeds.
std::optional<std::pair<int64_t, double>> scan_thm3_fixture(double beta1, double beta2,
                                                            double alpha,
                                                            std::span<const uint64_t> seeds,
                                                            int64_t probe_steps);

}  // namespace boundopt
