#pragma once

// Joint NPMLE of (theta, f, k) for doubly truncated data whose lifetime and
// left-truncation time are linked by a parametric copula. The likelihood is
//
//   L = prod_i W_ii f_i k_i / sum_{j,m} W_jm f_j k_m J(m, j),
//   W_jm = c_theta(s F_j, s K_m),  s = n / (n + 1),
//
// with F_j = sum_i f_i [X_i <= X_j] and K_m = sum_i k_i [U_i <= U_m]. The
// first copula argument is always a lifetime rank and the second a truncation
// rank. Scaling the cumulative arguments by s keeps every evaluation away
// from the upper-right corner of the unit square.

#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dtcopula/copula.hpp"
#include "dtcopula/kernels.hpp"
#include "dtcopula/npmle.hpp"
#include "dtcopula/sample.hpp"
#include "dtcopula/step_function.hpp"

namespace dtcopula {

enum class Algorithm { Simple, Full };

std::string_view to_string(Algorithm algorithm);
Algorithm parse_algorithm(std::string_view name);

/// How the full-algorithm mass updates treat the sum-to-one constraint.
///  Constrained: the score is matched to the common Lagrange multiplier,
///    so a fixed point is a stationary point of L on the simplex.
///  Unconstrained: the multiplier is dropped (score set to zero). Kept for
///    comparison; its fixed point differs from the maximizer at finite n.
enum class FullScore { Constrained, Unconstrained };

/// The current iterate with everything derived from it: cumulative vectors
/// and the corner-corrected copula arguments.
class WeightedState {
 public:
  WeightedState(const kernels::Kernels& kernels, Copula copula, MassVectors masses);

  std::size_t size() const noexcept { return f_.size(); }
  const kernels::Kernels& kernels() const noexcept { return *kernels_; }
  const Copula& copula() const noexcept { return copula_; }
  std::span<const double> f() const noexcept { return f_; }
  std::span<const double> k() const noexcept { return k_; }
  /// F_i = sum_m f_m [X_m <= X_i]
  std::span<const double> lifetime_cdf() const noexcept { return big_f_; }
  /// K_i = sum_m k_m [U_m <= U_i]
  std::span<const double> truncation_cdf() const noexcept { return big_k_; }
  kernels::PairArgs args() const { return {life_args_, trunc_args_}; }
  /// n / (n + 1)
  double corner_scale() const noexcept { return scale_; }

  void set_f(std::vector<double> f);
  void set_k(std::vector<double> k);
  void set_copula(Copula copula) { copula_ = copula; }

  /// Log-likelihood under the state's copula.
  double loglik() const { return loglik_at(copula_); }
  /// Log-likelihood with the masses held fixed and a different copula.
  /// Throws DegeneracyError when a diagonal weight or the normalizing sum
  /// is not positive.
  double loglik_at(const Copula& copula) const;

 private:
  void refresh_f();
  void refresh_k();

  const kernels::Kernels* kernels_;
  Copula copula_;
  double scale_;
  std::vector<double> f_, k_;
  std::vector<double> big_f_, big_k_;
  std::vector<double> life_args_, trunc_args_;
};

/// Log-likelihood by direct summation over J (serial reference path).
double loglik(const ObservedSample& sample, const TruncationMatrix& j,
              const Copula& copula, const MassVectors& masses);

/// Simple score updates: the weights are held fixed while solving for the
/// masses. Each returns a normalized vector in record order.
///   k_m ∝ 1 / F^w_m,  F^w_m = sum_j W_jm f_j J(m, j)
///   f_m ∝ 1 / K^w_m,  K^w_m = sum_j W_mj k_j J(j, m)
std::vector<double> update_k_simple(const WeightedState& state);
std::vector<double> update_f_simple(const WeightedState& state);

/// Full score updates, which account for the dependence of W on (f, k):
///   f_m ∝ 1 / (n A_m + n K^w_m - alpha B_m + alpha lambda_f)
///   k_m ∝ 1 / (n C_m + n F^w_m - alpha D_m + alpha lambda_k)
/// with A, B built from the d21 partial and lifetime indicators, C, D from
/// the d12 partial and truncation indicators, alpha the normalizing sum,
/// and lambda the Lagrange term (zero under FullScore::Unconstrained).
/// Throws DegeneracyError with the record index when a denominator is
/// not positive.
std::vector<double> update_k_full(const WeightedState& state,
                                  FullScore form = FullScore::Constrained);
std::vector<double> update_f_full(const WeightedState& state,
                                  FullScore form = FullScore::Constrained);

struct ThetaUpdate {
  double theta;
  double loglik;
  bool boundary_hit;
};

/// Bounded maximization of a scalar profile over a domain made of one or
/// more closed intervals. Without a warm start a 21-point scan over the
/// domain picks the bracket that Brent's method then refines; with a warm
/// start the search is local and the bracket slides until the maximizer is
/// interior. boundary_hit is set when the result lies within 1e-9 of the
/// outer ends of the domain.
ThetaUpdate maximize_profile(const std::function<double(double)>& profile,
                             std::span<const ThetaInterval> domain,
                             std::optional<double> warm_start = std::nullopt,
                             double tol = 1e-8);

/// Profile-likelihood update of theta with the state's masses held fixed.
ThetaUpdate update_theta(const WeightedState& state, Family family,
                         std::span<const ThetaInterval> domain,
                         std::optional<double> warm_start = std::nullopt);

struct FitOptions {
  double tol = 1e-6;
  int max_outer = 500;
  /// Empty means default_theta_domain(family).
  std::vector<ThetaInterval> theta_domain;
  /// Replaces the initial scan with a local search from this value.
  std::optional<double> theta_init;
  kernels::Backend backend = kernels::Backend::Parallel;
  FullScore full_score = FullScore::Constrained;
  EfronPetrosianOptions initializer{};
};

struct FitResult {
  Family family = Family::Independence;
  Algorithm algorithm = Algorithm::Simple;
  double theta_hat = 0.0;
  MassVectors masses;
  double loglik = 0.0;
  int iterations = 0;
  bool converged = false;
  bool boundary_hit = false;
  double last_change_f = 0.0;
  double last_change_k = 0.0;
  double last_change_theta = 0.0;
  /// Log-likelihood after each outer iteration.
  std::vector<double> loglik_trace;

  Copula copula() const { return Copula(family, theta_hat); }
};

/// Steps: start from the Efron-Petrosian masses and the profile maximizer of
/// theta at those masses; then repeatedly update k, f and theta (in that
/// order, recomputing the weights after each) until the max-abs changes of
/// f, k and theta are all <= tol. Running out of outer iterations yields
/// converged = false rather than an exception.
FitResult fit(const ObservedSample& sample, Family family, Algorithm algorithm,
              const FitOptions& options = {});

struct DistributionEstimates {
  StepFunction lifetime;    // F-hat
  StepFunction truncation;  // G-hat
};

DistributionEstimates distribution_estimates(const FitResult& fit,
                                             const ObservedSample& sample);

}  // namespace dtcopula
