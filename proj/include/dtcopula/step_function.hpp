#pragma once

#include <span>
#include <vector>

namespace dtcopula {

/// Right-continuous distribution function of a discrete law: mass w_i at
/// support point t_i. Tied support points are merged.
class StepFunction {
 public:
  StepFunction(std::span<const double> points, std::span<const double> masses);

  /// Sum of masses at support points <= t.
  double operator()(double t) const;

  /// Generalized inverse: the smallest support point whose cumulative mass
  /// is >= p. p <= 0 maps to the first point; p past the total mass maps to
  /// the last.
  double quantile(double p) const;

  std::span<const double> support() const noexcept { return support_; }
  std::span<const double> cumulative() const noexcept { return cumulative_; }

 private:
  std::vector<double> support_;
  std::vector<double> cumulative_;
};

}  // namespace dtcopula
