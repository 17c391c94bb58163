#pragma once

#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dtcopula/detail/pair_core.hpp"

namespace dtcopula {

enum class Family { Independence, FGM, Frank, Clayton };

std::string_view to_string(Family family);

/// Accepts "indep"/"independence", "fgm", "frank", "clayton" (case-insensitive).
Family parse_family(std::string_view name);

/// Inputs to density and its partials are clamped to [kEdge, 1 - kEdge].
inline constexpr double kEdge = 1e-10;

/// Random engine used throughout the library.
using Rng = std::mt19937_64;

/// A parametric bivariate copula. The first argument is always the lifetime
/// margin, the second the truncation margin.
class Copula {
 public:
  /// Throws DomainError when theta lies outside the family's parameter space
  /// (FGM [-1,1], Frank R\{0}, Clayton (0,inf)). Independence ignores theta.
  Copula(Family family, double theta);

  static Copula independence() { return Copula(Family::Independence, 0.0); }

  Family family() const noexcept { return family_; }
  double theta() const noexcept { return theta_; }

  /// C(u, v). Throws DomainError for u or v outside [0, 1].
  double cdf(double u, double v) const;

  /// d2C/dudv.
  double density(double u, double v) const;

  /// d3C/du2dv.
  double d21(double u, double v) const;

  /// d3C/dudv2.
  double d12(double u, double v) const;

  double kendall_tau() const;

  /// One draw (first = lifetime coordinate, second = truncation coordinate)
  /// from the copula by conditional inversion (FGM, Frank) or the
  /// gamma-frailty construction (Clayton).
  std::pair<double, double> sample_pair(Rng& rng) const;

 private:
  Family family_;
  double theta_;
};

/// Closed admissible theta range reported for a family after clipping the
/// open ends to the finite search defaults.
struct ThetaInterval {
  double lo;
  double hi;
};

/// Search domain for the profile likelihood: one interval for FGM and
/// Clayton, two for Frank (zero excluded).
std::vector<ThetaInterval> default_theta_domain(Family family);

/// Inverse of Copula::kendall_tau. Throws DomainError naming the attainable
/// range when tau cannot be reached by the family.
double tau_to_theta(Family family, double tau);

/// First-order Debye function D1(a) = (1/a) * int_0^a t/(e^t - 1) dt.
double debye1(double alpha);

/// Which copula derivative a batch evaluation returns.
enum class Partial { Density, D21, D12 };

/// Batch evaluator for c(u_i, v_j) over a product grid of arguments. Per
/// argument transforms (exponentials, powers) are computed once so the
/// per-pair cost is a handful of flops for FGM and Frank and a few
/// transcendental calls for Clayton. Arguments are clamped like the scalar
/// methods.
class PreparedPairs {
 public:
  PreparedPairs(const Copula& copula, std::span<const double> u,
                std::span<const double> v);

  std::size_t rows() const noexcept { return nu_; }
  std::size_t cols() const noexcept { return nv_; }
  Family family() const noexcept { return family_; }

  double density(std::size_t i, std::size_t j) const {
    switch (family_) {
      case Family::FGM: return detail::fgm_density(theta_, ua_[i], va_[j]);
      case Family::Frank:
        return detail::frank_density(theta_, eta_, fu_[i], fv_[j]);
      case Family::Clayton:
        return detail::clayton_density(theta_, uc_[i], vc_[j]);
      case Family::Independence: break;
    }
    return 1.0;
  }

  double d21(std::size_t i, std::size_t j) const {
    switch (family_) {
      case Family::FGM: return detail::fgm_d21(theta_, va_[j]);
      case Family::Frank: return detail::frank_d21(theta_, eta_, fu_[i], fv_[j]);
      case Family::Clayton: return detail::clayton_d21(theta_, uc_[i], vc_[j]);
      case Family::Independence: break;
    }
    return 0.0;
  }

  double d12(std::size_t i, std::size_t j) const {
    switch (family_) {
      case Family::FGM: return detail::fgm_d12(theta_, ua_[i]);
      case Family::Frank: return detail::frank_d12(theta_, eta_, fu_[i], fv_[j]);
      case Family::Clayton: return detail::clayton_d12(theta_, uc_[i], vc_[j]);
      case Family::Independence: break;
    }
    return 0.0;
  }

  double operator()(Partial partial, std::size_t i, std::size_t j) const {
    switch (partial) {
      case Partial::Density: return density(i, j);
      case Partial::D21: return d21(i, j);
      case Partial::D12: return d12(i, j);
    }
    return 0.0;
  }

 private:
  Family family_;
  double theta_;
  double eta_ = 0.0;  // Frank: 1 - exp(-theta)
  std::size_t nu_, nv_;
  std::vector<double> ua_, va_;  // FGM: 1 - 2u
  std::vector<detail::FrankArg> fu_, fv_;
  std::vector<detail::ClaytonArg> uc_, vc_;
};

}  // namespace dtcopula
