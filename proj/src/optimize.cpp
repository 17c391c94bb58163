#include "dtcopula/optimize.hpp"

#include <cmath>
#include <limits>

namespace dtcopula {

ScalarMaximum maximize_bounded(const std::function<double(double)>& f, double lo,
                               double hi, double tol) {
  // Minimize g = -f; non-finite values are treated as -inf for f.
  int evals = 0;
  auto g = [&](double x) {
    ++evals;
    const double v = f(x);
    return std::isfinite(v) ? -v : std::numeric_limits<double>::infinity();
  };
  if (hi <= lo) {
    const double v = g(lo);
    return {lo, -v, evals};
  }

  const double golden = 0.5 * (3.0 - std::sqrt(5.0));
  double a = lo, b = hi;
  double x = a + golden * (b - a), w = x, v = x;
  double fx = g(x), fw = fx, fv = fx;
  double d = 0.0, e = 0.0;
  const double eps = 1e-12;

  for (int iter = 0; iter < 500; ++iter) {
    const double xm = 0.5 * (a + b);
    const double tol1 = eps * std::abs(x) + tol / 3.0;
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - xm) <= tol2 - 0.5 * (b - a)) break;

    bool golden_step = true;
    if (std::abs(e) > tol1) {
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      const double etemp = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * etemp) && p > q * (a - x) &&
          p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = xm >= x ? tol1 : -tol1;
        golden_step = false;
      }
    }
    if (golden_step) {
      e = (x >= xm ? a : b) - x;
      d = golden * e;
    }
    const double u = std::abs(d) >= tol1 ? x + d : x + (d > 0.0 ? tol1 : -tol1);
    const double fu = g(u);
    if (fu <= fx) {
      if (u >= x) a = x; else b = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      if (u < x) a = u; else b = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }

  // Brent never samples the endpoints; check them when x has drifted there.
  const double edge = 10.0 * tol;
  if (x - lo <= edge) {
    const double fl = g(lo);
    if (fl <= fx) { x = lo; fx = fl; }
  }
  if (hi - x <= edge) {
    const double fh = g(hi);
    if (fh <= fx) { x = hi; fx = fh; }
  }
  return {x, -fx, evals};
}

}  // namespace dtcopula
