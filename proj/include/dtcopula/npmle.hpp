#pragma once

#include <vector>

#include "dtcopula/sample.hpp"

namespace dtcopula {

/// Point masses in record order: f[i] on lifetime X_i, k[i] on the window
/// (U_i, V_i). Both sum to one.
struct MassVectors {
  std::vector<double> f;
  std::vector<double> k;
};

struct EfronPetrosianOptions {
  double tol = 1e-6;
  int max_iter = 10000;
  bool record_trace = false;
};

struct EfronPetrosianResult {
  MassVectors masses;
  int iterations = 0;
  double last_change = 0.0;
  /// Log-likelihood after each iteration when record_trace is set.
  std::vector<double> loglik_trace;
};

/// NPMLE of (F, K) under independent truncation by the alternating updates
///   k_m ∝ 1 / sum_j f_j J(m, j),   f_m ∝ 1 / sum_j k_j J(j, m)
/// from uniform masses. Stops once the max-abs change of both f and k is
/// <= tol; throws ConvergenceError (with the last iterate) after max_iter.
EfronPetrosianResult efron_petrosian(const ObservedSample& sample,
                                     const EfronPetrosianOptions& options = {});

/// Log-likelihood under independence:
///   sum_i log f_i + log k_i - n log sum_{m,j} f_j k_m J(m, j).
double independence_loglik(const TruncationMatrix& j, const MassVectors& masses);

}  // namespace dtcopula
