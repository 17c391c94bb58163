#pragma once

// Weighted copula sums over the truncation pattern. These are the O(n^2)
// inner loops of every likelihood evaluation and score update.
//
// All vectors are in record order. For record i, lifetime_args[i] is the
// first copula argument attached to its lifetime and truncation_args[i] the
// second argument attached to its truncation window. The three sums are
//
//   window sum,   per window m:   sum_j J(m, j) c(l_j, t_m) w_j
//   lifetime sum, per lifetime j: sum_m J(m, j) c(l_j, t_m) w_m
//   total mass:                   sum_m sum_j J(m, j) c(l_j, t_m) f_j k_m
//
// where c is the copula density or one of its third-order partials.
//
// `reference` is the dense serial implementation that walks J directly and
// calls the scalar Copula methods. `parallel` walks the sorted window layout
// with an OpenMP loop over rows and batch-prepared copula arguments. Each row
// is reduced serially so results do not depend on the thread count.

#include <span>
#include <vector>

#include "dtcopula/copula.hpp"
#include "dtcopula/sample.hpp"

namespace dtcopula::kernels {

struct PairArgs {
  std::span<const double> lifetime;
  std::span<const double> truncation;
};

namespace reference {

std::vector<double> window_sums(const Copula& copula,
                                const TruncationMatrix& j, PairArgs args,
                                Partial partial,
                                std::span<const double> lifetime_weights);

std::vector<double> lifetime_sums(const Copula& copula,
                                  const TruncationMatrix& j, PairArgs args,
                                  Partial partial,
                                  std::span<const double> window_weights);

double total_mass(const Copula& copula, const TruncationMatrix& j,
                  PairArgs args, std::span<const double> f,
                  std::span<const double> k);

}  // namespace reference

namespace parallel {

std::vector<double> window_sums(const Copula& copula,
                                const WindowLayout& layout, PairArgs args,
                                Partial partial,
                                std::span<const double> lifetime_weights);

std::vector<double> lifetime_sums(const Copula& copula,
                                  const WindowLayout& layout, PairArgs args,
                                  Partial partial,
                                  std::span<const double> window_weights);

double total_mass(const Copula& copula, const WindowLayout& layout,
                  PairArgs args, std::span<const double> f,
                  std::span<const double> k);

}  // namespace parallel

enum class Backend { Reference, Parallel };

/// Binds a sample to one backend so callers need not carry both J and the
/// window layout around.
class Kernels {
 public:
  Kernels(const ObservedSample& sample, Backend backend);

  Backend backend() const noexcept { return backend_; }
  const TruncationMatrix& matrix() const noexcept { return matrix_; }
  const WindowLayout& layout() const noexcept { return layout_; }

  std::vector<double> window_sums(const Copula& copula, PairArgs args,
                                  Partial partial,
                                  std::span<const double> lifetime_weights) const;
  std::vector<double> lifetime_sums(const Copula& copula, PairArgs args,
                                    Partial partial,
                                    std::span<const double> window_weights) const;
  double total_mass(const Copula& copula, PairArgs args,
                    std::span<const double> f, std::span<const double> k) const;

 private:
  Backend backend_;
  TruncationMatrix matrix_;
  WindowLayout layout_;
};

}  // namespace dtcopula::kernels
