#include "dtcopula/kernels.hpp"

namespace dtcopula::kernels {

namespace {

double pair_value(const Copula& copula, Partial partial, double l, double t) {
  switch (partial) {
    case Partial::Density: return copula.density(l, t);
    case Partial::D21: return copula.d21(l, t);
    case Partial::D12: return copula.d12(l, t);
  }
  return 0.0;
}

}  // namespace

namespace reference {

std::vector<double> window_sums(const Copula& copula, const TruncationMatrix& j,
                                PairArgs args, Partial partial,
                                std::span<const double> lifetime_weights) {
  const std::size_t n = j.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t m = 0; m < n; ++m) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (j(m, i))
        s += lifetime_weights[i] *
             pair_value(copula, partial, args.lifetime[i], args.truncation[m]);
    out[m] = s;
  }
  return out;
}

std::vector<double> lifetime_sums(const Copula& copula,
                                  const TruncationMatrix& j, PairArgs args,
                                  Partial partial,
                                  std::span<const double> window_weights) {
  const std::size_t n = j.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t m = 0; m < n; ++m)
      if (j(m, i))
        s += window_weights[m] *
             pair_value(copula, partial, args.lifetime[i], args.truncation[m]);
    out[i] = s;
  }
  return out;
}

double total_mass(const Copula& copula, const TruncationMatrix& j,
                  PairArgs args, std::span<const double> f,
                  std::span<const double> k) {
  const auto rows = window_sums(copula, j, args, Partial::Density, f);
  double s = 0.0;
  for (std::size_t m = 0; m < rows.size(); ++m) s += k[m] * rows[m];
  return s;
}

}  // namespace reference

Kernels::Kernels(const ObservedSample& sample, Backend backend)
    : backend_(backend), matrix_(sample), layout_(sample) {}

std::vector<double> Kernels::window_sums(
    const Copula& copula, PairArgs args, Partial partial,
    std::span<const double> lifetime_weights) const {
  if (backend_ == Backend::Reference)
    return reference::window_sums(copula, matrix_, args, partial,
                                  lifetime_weights);
  return parallel::window_sums(copula, layout_, args, partial, lifetime_weights);
}

std::vector<double> Kernels::lifetime_sums(
    const Copula& copula, PairArgs args, Partial partial,
    std::span<const double> window_weights) const {
  if (backend_ == Backend::Reference)
    return reference::lifetime_sums(copula, matrix_, args, partial,
                                    window_weights);
  return parallel::lifetime_sums(copula, layout_, args, partial, window_weights);
}

double Kernels::total_mass(const Copula& copula, PairArgs args,
                           std::span<const double> f,
                           std::span<const double> k) const {
  if (backend_ == Backend::Reference)
    return reference::total_mass(copula, matrix_, args, f, k);
  return parallel::total_mass(copula, layout_, args, f, k);
}

}  // namespace dtcopula::kernels
