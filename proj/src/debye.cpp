#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "dtcopula/copula.hpp"

namespace dtcopula {

double debye1(double alpha) {
  if (std::abs(alpha) < 1e-6) {
    // Series about zero: 1 - a/4 + a^2/36.
    return 1.0 - alpha / 4.0 + alpha * alpha / 36.0;
  }
  auto integrand = [](double t) {
    return t == 0.0 ? 1.0 : t / std::expm1(t);
  };
  double err = 0.0;
  const double integral =
      boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
          integrand, 0.0, alpha, 15, 1e-13, &err);
  return integral / alpha;
}

}  // namespace dtcopula
