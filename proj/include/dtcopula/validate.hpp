#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dtcopula/copula.hpp"

namespace dtcopula {

struct CheckResult {
  Family family;
  double theta;
  std::string check;  // "normalization", "density_vs_cdf", "d21_vs_density", ...
  bool passed;
  double worst;      // largest error seen
  double tolerance;
};

/// Evaluates c, d21 or d12 at (u, v). The validator calls the copula through
/// this hook so tests can inject a faulty partial.
using PartialHook =
    std::function<double(const Copula& copula, Partial partial, double u, double v)>;

struct ValidationOptions {
  std::vector<Family> families{Family::FGM, Family::Frank, Family::Clayton};
  /// Empty: five default parameter values per family.
  std::vector<double> thetas;
  double normalization_tol = 1e-4;
  double derivative_rel_tol = 1e-5;
  double tau_tol = 1e-6;
  PartialHook hook{};
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool all_passed() const;
};

/// Default parameter grid used by validate_copulas for a family.
std::vector<double> default_validation_thetas(Family family);

/// Per family and theta:
///  normalization    |int int c - 1|
///  density_vs_cdf   c against the mixed central difference of C
///  d21_vs_density   d21 against the central difference of c in u
///  d12_vs_density   d12 against the central difference of c in v
///  tau_roundtrip    |tau_to_theta(kendall_tau(theta)) - theta| (relative
///                   beyond |theta| = 1)
/// Finite differences use Richardson extrapolation and errors are relative
/// to max(|exact|, 1). Throws ValidationError for an empty family list.
ValidationReport validate_copulas(const ValidationOptions& options = {});

/// int_0^1 int_0^1 c(u, v) du dv by nested adaptive Gauss-Kronrod.
double density_integral(const Copula& copula, const PartialHook& hook = {});

}  // namespace dtcopula
