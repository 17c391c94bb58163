#include "dtcopula/step_function.hpp"

#include <algorithm>
#include <numeric>

#include "dtcopula/error.hpp"

namespace dtcopula {

StepFunction::StepFunction(std::span<const double> points,
                           std::span<const double> masses) {
  if (points.size() != masses.size() || points.empty())
    throw ValidationError("step function needs matching, non-empty inputs");
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return points[a] < points[b];
  });
  double total = 0.0;
  for (std::size_t idx : order) {
    total += masses[idx];
    if (!support_.empty() && support_.back() == points[idx]) {
      cumulative_.back() = total;
    } else {
      support_.push_back(points[idx]);
      cumulative_.push_back(total);
    }
  }
}

double StepFunction::operator()(double t) const {
  const auto it = std::upper_bound(support_.begin(), support_.end(), t);
  if (it == support_.begin()) return 0.0;
  return cumulative_[static_cast<std::size_t>(it - support_.begin()) - 1];
}

double StepFunction::quantile(double p) const {
  const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), p);
  if (it == cumulative_.end()) return support_.back();
  return support_[static_cast<std::size_t>(it - cumulative_.begin())];
}

}  // namespace dtcopula
