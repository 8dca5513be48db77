#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace boundopt {

// Axis-aligned feasible region, possibly unbounded on some sides
// (+-infinity bounds are allowed and mean "no constraint on that side").
class FeasibleBox {
 public:
  FeasibleBox(std::vector<double> lo, std::vector<double> hi);

  static FeasibleBox bounds(size_t dim, double lo, double hi);  // scalar broadcast
  static FeasibleBox unbounded(size_t dim);

  size_t dim() const { return lo_.size(); }
  double lo(size_t i) const { return lo_[i]; }
  double hi(size_t i) const { return hi_[i]; }

  bool contains(std::span<const double> x) const;

  // Coordinate-wise clamp into [lo_i, hi_i].
  double clamp1(size_t i, double v) const;
  void clamp(std::span<double> x) const;
  std::vector<double> clamped(std::span<const double> x) const;

  // Sup-norm diameter: max_i (hi_i - lo_i); +infinity when any side is open.
  double diameter_inf() const;
  bool bounded() const;

 private:
  std::vector<double> lo_, hi_;
};

// Strictly positive diagonal weight matrix used as the projection metric and
// in weighted norms.
class DiagonalMetric {
 public:
  explicit DiagonalMetric(std::vector<double> weights);
  static DiagonalMetric identity(size_t dim);

  size_t dim() const { return w_.size(); }
  std::span<const double> weights() const { return w_; }
  double weight(size_t i) const { return w_[i]; }

 private:
  std::vector<double> w_;
};

// argmin_{u in box} (u - y)' Q (u - y) for diagonal Q. The objective
// separates per coordinate, so the minimizer is the plain clamp and does not
// depend on the (validated) metric.
std::vector<double> project_box(std::span<const double> y, const FeasibleBox& box,
                                const DiagonalMetric& metric);

// sqrt(sum_i w_i v_i^2)
double weighted_norm(const DiagonalMetric& metric, std::span<const double> v);

}  // namespace boundopt
