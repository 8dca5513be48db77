#include "geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace boundopt {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

FeasibleBox::FeasibleBox(std::vector<double> lo, std::vector<double> hi)
    : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_.size() != hi_.size())
    throw std::invalid_argument("box: lower and upper bound dimensions differ");
  if (lo_.empty()) throw std::invalid_argument("box: dimension must be positive");
  for (size_t i = 0; i < lo_.size(); ++i) {
    if (std::isnan(lo_[i]) || std::isnan(hi_[i]))
      throw std::invalid_argument("box: bounds must not be NaN (coordinate " + std::to_string(i) + ")");
    if (!(lo_[i] <= hi_[i]))
      throw std::invalid_argument("box: lower bound exceeds upper bound at coordinate " + std::to_string(i));
  }
}

FeasibleBox FeasibleBox::bounds(size_t dim, double lo, double hi) {
  return FeasibleBox(std::vector<double>(dim, lo), std::vector<double>(dim, hi));
}

FeasibleBox FeasibleBox::unbounded(size_t dim) {
  return bounds(dim, -kInf, kInf);
}

bool FeasibleBox::contains(std::span<const double> x) const {
  if (x.size() != dim()) throw std::invalid_argument("box: point dimension mismatch");
  for (size_t i = 0; i < x.size(); ++i)
    if (x[i] < lo_[i] || x[i] > hi_[i]) return false;
  return true;
}

double FeasibleBox::clamp1(size_t i, double v) const {
  return std::min(hi_[i], std::max(lo_[i], v));
}

void FeasibleBox::clamp(std::span<double> x) const {
  if (x.size() != dim()) throw std::invalid_argument("box: point dimension mismatch");
  for (size_t i = 0; i < x.size(); ++i) x[i] = clamp1(i, x[i]);
}

std::vector<double> FeasibleBox::clamped(std::span<const double> x) const {
  std::vector<double> out(x.begin(), x.end());
  clamp(out);
  return out;
}

double FeasibleBox::diameter_inf() const {
  double d = 0.0;
  for (size_t i = 0; i < dim(); ++i) {
    const double w = hi_[i] - lo_[i];
    if (std::isinf(w)) return kInf;
    d = std::max(d, w);
  }
  return d;
}

bool FeasibleBox::bounded() const {
  return std::isfinite(diameter_inf());
}

DiagonalMetric::DiagonalMetric(std::vector<double> weights) : w_(std::move(weights)) {
  if (w_.empty()) throw std::invalid_argument("metric: dimension must be positive");
  for (size_t i = 0; i < w_.size(); ++i) {
    if (!(w_[i] > 0.0) || !std::isfinite(w_[i]))
      throw std::invalid_argument("metric: weights must be strictly positive and finite (coordinate " +
                                  std::to_string(i) + ")");
  }
}

DiagonalMetric DiagonalMetric::identity(size_t dim) {
  return DiagonalMetric(std::vector<double>(dim, 1.0));
}

std::vector<double> project_box(std::span<const double> y, const FeasibleBox& box,
                                const DiagonalMetric& metric) {
  if (y.size() != box.dim()) throw std::invalid_argument("project_box: point dimension mismatch");
  if (metric.dim() != box.dim()) throw std::invalid_argument("project_box: metric dimension mismatch");
  return box.clamped(y);
}

double weighted_norm(const DiagonalMetric& metric, std::span<const double> v) {
  if (v.size() != metric.dim()) throw std::invalid_argument("weighted_norm: dimension mismatch");
  double s = 0.0;
  for (size_t i = 0; i < v.size(); ++i) s += metric.weight(i) * v[i] * v[i];
  return std::sqrt(s);
}

}  // namespace boundopt
