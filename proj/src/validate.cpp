#include "dtcopula/validate.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "dtcopula/error.hpp"

namespace dtcopula {

bool ValidationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed; });
}

std::vector<double> default_validation_thetas(Family family) {
  switch (family) {
    case Family::FGM: return {-1.0, -0.5, 0.3, 0.7, 1.0};
    case Family::Frank: return {-2.1, -1.0, 1.86, 5.74, 20.9};
    case Family::Clayton: return {0.5, 2.0, 5.0, 10.0, 18.0};
    case Family::Independence: return {0.0};
  }
  return {};
}

namespace {

PartialHook default_hook() {
  return [](const Copula& c, Partial p, double u, double v) {
    switch (p) {
      case Partial::Density: return c.density(u, v);
      case Partial::D21: return c.d21(u, v);
      case Partial::D12: return c.d12(u, v);
    }
    return 0.0;
  };
}

// Richardson-extrapolated central difference: (4 D(h/2) - D(h)) / 3.
template <class F>
double richardson(F&& central, double h) {
  return (4.0 * central(0.5 * h) - central(h)) / 3.0;
}

double rel_error(double approx, double exact) {
  return std::abs(approx - exact) / std::max(std::abs(exact), 1.0);
}

const double kGrid[] = {0.2, 0.35, 0.5, 0.65, 0.8};

}  // namespace

double density_integral(const Copula& copula, const PartialHook& hook) {
  using boost::math::quadrature::gauss_kronrod;
  const PartialHook eval = hook ? hook : default_hook();
  auto inner = [&](double u) {
    return gauss_kronrod<double, 31>::integrate(
        [&](double v) { return eval(copula, Partial::Density, u, v); }, 0.0, 1.0, 15,
        1e-9);
  };
  return gauss_kronrod<double, 31>::integrate(inner, 0.0, 1.0, 15, 1e-8);
}

ValidationReport validate_copulas(const ValidationOptions& options) {
  if (options.families.empty()) throw ValidationError("no copula family to validate");
  const PartialHook eval = options.hook ? options.hook : default_hook();
  ValidationReport report;
  for (Family family : options.families) {
    const auto thetas =
        options.thetas.empty() ? default_validation_thetas(family) : options.thetas;
    for (double theta : thetas) {
      const Copula c(family, theta);
      auto add = [&](const char* name, double worst, double tol) {
        report.checks.push_back({family, theta, name, worst <= tol, worst, tol});
      };

      add("normalization", std::abs(density_integral(c, eval) - 1.0),
          options.normalization_tol);

      // Truncation error grows like (theta h)^4 for the steep families.
      const double h = 5e-4 / std::max(1.0, std::abs(theta) / 5.0);
      double w_cdf = 0.0, w_21 = 0.0, w_12 = 0.0;
      for (double u : kGrid)
        for (double v : kGrid) {
          const double fd_c = richardson(
              [&](double s) {
                return (c.cdf(u + s, v + s) - c.cdf(u + s, v - s) - c.cdf(u - s, v + s) +
                        c.cdf(u - s, v - s)) /
                       (4.0 * s * s);
              },
              h);
          w_cdf = std::max(w_cdf, rel_error(fd_c, eval(c, Partial::Density, u, v)));
          const double fd_21 = richardson(
              [&](double s) {
                return (eval(c, Partial::Density, u + s, v) -
                        eval(c, Partial::Density, u - s, v)) /
                       (2.0 * s);
              },
              h);
          w_21 = std::max(w_21, rel_error(fd_21, eval(c, Partial::D21, u, v)));
          const double fd_12 = richardson(
              [&](double s) {
                return (eval(c, Partial::Density, u, v + s) -
                        eval(c, Partial::Density, u, v - s)) /
                       (2.0 * s);
              },
              h);
          w_12 = std::max(w_12, rel_error(fd_12, eval(c, Partial::D12, u, v)));
        }
      add("density_vs_cdf", w_cdf, options.derivative_rel_tol);
      add("d21_vs_density", w_21, options.derivative_rel_tol);
      add("d12_vs_density", w_12, options.derivative_rel_tol);

      if (family != Family::Independence) {
        const double back = tau_to_theta(family, c.kendall_tau());
        add("tau_roundtrip", std::abs(back - theta) / std::max(std::abs(theta), 1.0),
            options.tau_tol);
      }
    }
  }
  return report;
}

}  // namespace dtcopula
