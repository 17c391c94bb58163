#pragma once

// Monte Carlo harness for the uniform-margin scenario: X* ~ U(0, 1),
// U* ~ U(u_shift, u_shift + 1), dependence through a copula, and interval
// sampling with window length phi.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dtcopula/copula.hpp"
#include "dtcopula/estimator.hpp"
#include "dtcopula/sample.hpp"

namespace dtcopula {

struct ModelSpec {
  std::string label;
  Family family = Family::Independence;
  double theta = 0.0;
  std::size_t n = 250;
  double phi = 1.5;
  double u_shift = -0.6;
};

/// The labelled scenarios ("Model 1.1" ... "Model 3.3") with n = 250.
const std::vector<ModelSpec>& model_catalog();

/// Looks a label up in the catalog ("Model 2.1", "model 2.1" and "2.1" all
/// resolve) and sets n. Throws ValidationError listing the valid labels.
ModelSpec find_model(std::string_view label, std::size_t n = 250);

/// Throws ValidationError for n == 0, phi <= 0 or an inadmissible theta.
void validate_model(const ModelSpec& model);

struct GeneratedSample {
  ObservedSample sample;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  /// rejected / (rejected + accepted)
  double truncation_proportion() const;
};

/// Draws copula pairs, maps them to (X*, U*) through the uniform margins and
/// keeps observable pairs until model.n are accepted. Throws SamplingError
/// after cap_factor * n candidates.
GeneratedSample generate_sample(const ModelSpec& model, Rng& rng,
                                std::size_t cap_factor = 10000);

struct TruncationCount {
  std::size_t candidates = 0;
  std::size_t rejected = 0;
  double proportion() const {
    return candidates ? static_cast<double>(rejected) / candidates : 0.0;
  }
};

/// Rejection count over a fixed number of candidate pairs.
TruncationCount count_truncation(const ModelSpec& model, std::size_t candidates,
                                 Rng& rng);

/// Kendall's tau of a bivariate sample (O(n^2) pair count, tau-a).
double empirical_kendall_tau(std::span<const double> a, std::span<const double> b);

inline constexpr std::size_t kDeciles = 9;
using DecileArray = std::array<double, kDeciles>;

struct AlgorithmSummary {
  Algorithm algorithm = Algorithm::Simple;
  std::size_t successes = 0;
  std::size_t failures = 0;      // replicates dropped after an estimator error
  std::size_t nonconverged = 0;  // included, hit max_outer
  double theta_mean = 0.0;
  double theta_bias = 0.0;
  double theta_sd = 0.0;
  DecileArray mse_f{};
  DecileArray bias_f{};
  DecileArray mse_k{};
  DecileArray bias_k{};
  std::vector<double> thetas;  // per successful replicate, in replicate order
};

struct ComparatorSummary {
  std::size_t successes = 0;
  std::size_t failures = 0;
  DecileArray mse_f{};
  DecileArray bias_f{};
};

struct ExperimentOptions {
  std::vector<Algorithm> algorithms{Algorithm::Simple};
  /// Also fit the Efron-Petrosian NPMLE, which ignores the dependence.
  bool independence_comparator = false;
  FitOptions fit{};
};

struct ExperimentReport {
  ModelSpec model;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  DecileArray probabilities{};  // 0.1 ... 0.9
  DecileArray x_deciles{};      // true lifetime deciles
  DecileArray u_deciles{};      // true truncation-time deciles
  double truncation_proportion = 0.0;  // pooled over all replicates
  std::vector<AlgorithmSummary> algorithms;
  /// (MSE(simple) - MSE(full)) / MSE(full) of F-hat per decile, when both
  /// algorithms ran.
  std::optional<DecileArray> relative_mse_f;
  std::optional<ComparatorSummary> independence;
  double wall_seconds = 0.0;

  const AlgorithmSummary& summary(Algorithm algorithm) const;
};

/// Runs `replicates` independent replicates; replicate r draws from the
/// stream stream_seed(seed, r) and may run on any thread. Throws
/// ReplicationError when more than 20% of the replicates fail for any
/// algorithm.
ExperimentReport run_experiment(const ModelSpec& model, std::size_t replicates,
                                std::uint64_t seed,
                                const ExperimentOptions& options = {});

}  // namespace dtcopula
