#pragma once

// Copula-based bootstrap: resamples are drawn from the fitted copula with
// the fitted marginals F-hat and G-hat, subject to the same truncation.

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "dtcopula/copula.hpp"
#include "dtcopula/estimator.hpp"
#include "dtcopula/sample.hpp"

namespace dtcopula {

struct Resample {
  ObservedSample sample;
  std::size_t rejected = 0;
};

/// n accepted pairs X* = F-hat^-1(T1), U* = G-hat^-1(T2) with (T1, T2) from
/// the fitted copula, keeping only pairs with U* <= X* <= U* + phi. Throws
/// SamplingError after cap_factor * n candidates.
Resample resample(const FitResult& fit, const ObservedSample& sample, Rng& rng,
                  std::size_t cap_factor = 10000);

/// Master seed and attempt index to the seed of that attempt's stream.
using SeedSchedule = std::function<std::uint64_t(std::uint64_t seed, std::size_t attempt)>;

struct BootstrapOptions {
  std::size_t replicates = 500;  // B
  /// Probability levels p at which F-hat and G-hat are tracked; the
  /// evaluation points are the original fit's quantiles F-hat^-1(p) and
  /// G-hat^-1(p).
  std::vector<double> quantiles{0.1, 0.25, 0.5, 0.75, 0.9};
  std::uint64_t seed = 0;
  /// Options for every refit (same family and algorithm as the input fit).
  FitOptions fit{};
  /// Defaults to stream_seed. Tests replace it to force identical resamples.
  SeedSchedule seed_schedule{};
};

struct BootstrapReport {
  std::size_t replicates = 0;  // successful replicates, always == B
  std::size_t attempts = 0;
  std::size_t failures = 0;  // non-converged or degenerate refits, redrawn
  std::uint64_t seed = 0;
  double theta_hat = 0.0;
  double se_theta = 0.0;
  std::pair<double, double> ci_theta{0.0, 0.0};
  std::vector<double> quantiles;
  std::vector<double> f_points, se_f;  // F-hat^-1(p) and sd of F*(F-hat^-1(p))
  std::vector<double> k_points, se_k;  // G-hat^-1(p) and sd of G*(G-hat^-1(p))
  std::size_t rejected_total = 0;      // rejected candidates over all attempts
  std::vector<double> replicate_thetas;  // in attempt order
};

/// Refits B resamples. Attempt a draws from seed_schedule(seed, a); failed
/// attempts are replaced by later ones, and the B successes with the lowest
/// attempt indices are kept, so the report does not depend on the thread
/// count. Throws ValidationError for B < 2 and ReplicationError once the
/// failures exceed B (more than half of all attempts).
BootstrapReport bootstrap_se(const FitResult& fit, const ObservedSample& sample,
                             const BootstrapOptions& options = {});

}  // namespace dtcopula
