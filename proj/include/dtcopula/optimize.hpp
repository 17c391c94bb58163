#pragma once

#include <functional>

namespace dtcopula {

struct ScalarMaximum {
  double x;
  double value;
  int evaluations;
};

/// Brent's derivative-free bounded maximization (golden section with
/// parabolic steps) of f on [lo, hi], to absolute bracket width `tol`.
/// Endpoints are evaluated when the interior optimum converges onto them, so
/// an edge maximizer is returned exactly at the edge.
ScalarMaximum maximize_bounded(const std::function<double(double)>& f, double lo,
                               double hi, double tol = 1e-8);

}  // namespace dtcopula
