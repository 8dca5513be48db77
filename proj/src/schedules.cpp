#include "schedules.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace boundopt {

namespace {

void require_step(int64_t t) {
  if (t < 1) throw std::invalid_argument("bound schedule: step index must be >= 1, got " + std::to_string(t));
}

}  // namespace

BoundSchedule::BoundSchedule(BoundForm form, double alpha_star, double beta)
    : form_(form), alpha_star_(alpha_star), beta_(beta) {
  if (!(beta >= 0.0 && beta < 1.0))
    throw std::invalid_argument("bound schedule: beta must lie in [0, 1), got " + std::to_string(beta));
  if (form != BoundForm::kAdamUnbounded) {
    if (!(alpha_star > 0.0) || !std::isfinite(alpha_star))
      throw std::invalid_argument("bound schedule: alpha_star must be positive and finite, got " +
                                  std::to_string(alpha_star));
  }
}

BoundSchedule BoundSchedule::paper_default(double beta2, double alpha_star) {
  return BoundSchedule(BoundForm::kPaperDefault, alpha_star, beta2);
}

BoundSchedule BoundSchedule::appendix_general(double alpha_star, double beta) {
  return BoundSchedule(BoundForm::kAppendixGeneral, alpha_star, beta);
}

BoundSchedule BoundSchedule::constant(double alpha_star) {
  return BoundSchedule(BoundForm::kConstant, alpha_star, 0.0);
}

BoundSchedule BoundSchedule::adam_unbounded() {
  return BoundSchedule(BoundForm::kAdamUnbounded, 0.0, 0.0);
}

double BoundSchedule::eta_lower(int64_t t) const {
  require_step(t);
  const double td = static_cast<double>(t);
  switch (form_) {
    case BoundForm::kPaperDefault:
      return alpha_star_ - alpha_star_ / ((1.0 - beta_) * td + 1.0);
    case BoundForm::kAppendixGeneral:
      return (1.0 - 1.0 / ((1.0 - beta_) * td + 1.0)) * alpha_star_;
    case BoundForm::kConstant:
      return alpha_star_;
    case BoundForm::kAdamUnbounded:
      return 0.0;
  }
  throw std::logic_error("bound schedule: unknown form");
}

double BoundSchedule::eta_upper(int64_t t) const {
  require_step(t);
  const double td = static_cast<double>(t);
  switch (form_) {
    case BoundForm::kPaperDefault:
      return alpha_star_ + alpha_star_ / ((1.0 - beta_) * td);
    case BoundForm::kAppendixGeneral:
      return (1.0 + 1.0 / ((1.0 - beta_) * td)) * alpha_star_;
    case BoundForm::kConstant:
      return alpha_star_;
    case BoundForm::kAdamUnbounded:
      return kRateInfinity;
  }
  throw std::logic_error("bound schedule: unknown form");
}

const char* bound_form_name(BoundForm form) {
  switch (form) {
    case BoundForm::kPaperDefault: return "paper_default";
    case BoundForm::kAppendixGeneral: return "appendix_general";
    case BoundForm::kConstant: return "constant";
    case BoundForm::kAdamUnbounded: return "adam_unbounded";
  }
  return "?";
}

BoundForm bound_form_from_name(std::string_view name) {
  if (name == "paper_default") return BoundForm::kPaperDefault;
  if (name == "appendix_general") return BoundForm::kAppendixGeneral;
  if (name == "constant") return BoundForm::kConstant;
  if (name == "adam_unbounded") return BoundForm::kAdamUnbounded;
  throw std::invalid_argument("bound schedule: unknown form '" + std::string(name) + "'");
}

double clip_rate(double raw, double lo, double hi) {
  return std::min(hi, std::max(lo, raw));
}

std::vector<double> clip_rates(std::span<const double> raw, double lo, double hi) {
  if (!(lo <= hi)) throw std::invalid_argument("clip_rates: lower bound exceeds upper bound");
  std::vector<double> out(raw.size());
  for (size_t i = 0; i < raw.size(); ++i) out[i] = clip_rate(raw[i], lo, hi);
  return out;
}

void clip_rates_inplace(std::span<double> rates, double lo, double hi) {
  if (!(lo <= hi)) throw std::invalid_argument("clip_rates: lower bound exceeds upper bound");
  for (double& r : rates) r = clip_rate(r, lo, hi);
}

}  // namespace boundopt
