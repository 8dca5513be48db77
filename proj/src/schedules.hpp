#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

namespace boundopt {

// Families of per-step learning-rate bounds [eta_lower(t), eta_upper(t)].
//
//   paper_default     eta_l(t) = a* - a*/((1-b)t + 1),  eta_u(t) = a* + a*/((1-b)t)
//                     (a* = 0.1 unless overridden, b is the optimizer's beta2)
//   appendix_general  eta_l(t) = (1 - 1/((1-b)t + 1)) a*,  eta_u(t) = (1 + 1/((1-b)t)) a*
//   constant          eta_l = eta_u = a*
//   adam_unbounded    eta_l = 0, eta_u = kRateInfinity (no effective clipping)
//
// Both parameterized forms start wide at t = 1 and converge monotonically to
// the final step size a*.
enum class BoundForm { kPaperDefault, kAppendixGeneral, kConstant, kAdamUnbounded };

// Largest finite rate, standing in for an infinite upper bound. Chosen so
// clip_rate(x, 0, kRateInfinity) is a bit-exact identity on finite
// non-negative rates while +inf raw rates (alpha/sqrt(v) with v = 0) map to a
// usable finite value.
inline constexpr double kRateInfinity = std::numeric_limits<double>::max();

class BoundSchedule {
 public:
  BoundSchedule(BoundForm form, double alpha_star, double beta);

  static BoundSchedule paper_default(double beta2, double alpha_star = 0.1);
  static BoundSchedule appendix_general(double alpha_star, double beta);
  static BoundSchedule constant(double alpha_star);
  static BoundSchedule adam_unbounded();

  // Lower/upper rate bound at step t >= 1. eta_lower > 0 for every form
  // except adam_unbounded; eta_upper is finite except for adam_unbounded,
  // which reports kRateInfinity.
  double eta_lower(int64_t t) const;
  double eta_upper(int64_t t) const;

  BoundForm form() const { return form_; }
  double alpha_star() const { return alpha_star_; }
  double beta() const { return beta_; }

 private:
  BoundForm form_;
  double alpha_star_;
  double beta_;
};

const char* bound_form_name(BoundForm form);
BoundForm bound_form_from_name(std::string_view name);

// Element-wise min(hi, max(lo, raw)). With lo = 0, hi = kRateInfinity this is
// an exact identity on finite non-negative inputs.
double clip_rate(double raw, double lo, double hi);
std::vector<double> clip_rates(std::span<const double> raw, double lo, double hi);
void clip_rates_inplace(std::span<double> rates, double lo, double hi);

}  // namespace boundopt
