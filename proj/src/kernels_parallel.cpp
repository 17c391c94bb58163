#include <omp.h>

#include <type_traits>

#include "dtcopula/kernels.hpp"

namespace dtcopula::kernels::parallel {

namespace {

constexpr std::size_t kMinParallelRows = 64;

bool go_parallel(std::size_t n) {
  return n >= kMinParallelRows && !omp_in_parallel();
}

struct Sorted {
  std::vector<double> lifetime;    // by lifetime position p
  std::vector<double> truncation;  // by window position q
};

Sorted sort_args(const WindowLayout& layout, PairArgs args) {
  Sorted s{std::vector<double>(layout.n), std::vector<double>(layout.n)};
  for (std::size_t p = 0; p < layout.n; ++p)
    s.lifetime[p] = args.lifetime[layout.by_x[p]];
  for (std::size_t q = 0; q < layout.n; ++q)
    s.truncation[q] = args.truncation[layout.by_u[q]];
  return s;
}

template <Partial P>
double eval(const PreparedPairs& pairs, std::size_t p, std::size_t q) {
  if constexpr (P == Partial::Density) return pairs.density(p, q);
  else if constexpr (P == Partial::D21) return pairs.d21(p, q);
  else return pairs.d12(p, q);
}

// Row sums over windows: out[q] = sum_{p in window q} w[p] c(p, q).
template <Partial P>
void window_rows(const PreparedPairs& pairs, const WindowLayout& layout,
                 const std::vector<double>& w, std::vector<double>& out) {
  const auto n = static_cast<std::ptrdiff_t>(layout.n);
#pragma omp parallel for schedule(static) if (go_parallel(layout.n))
  for (std::ptrdiff_t qi = 0; qi < n; ++qi) {
    const auto q = static_cast<std::size_t>(qi);
    double s = 0.0;
    for (std::size_t p = layout.life_lo[q]; p < layout.life_hi[q]; ++p)
      s += w[p] * eval<P>(pairs, p, q);
    out[q] = s;
  }
}

// Row sums over lifetimes: out[p] = sum_{q containing p} w[q] c(p, q).
template <Partial P>
void lifetime_rows(const PreparedPairs& pairs, const WindowLayout& layout,
                   const std::vector<double>& w, std::vector<double>& out) {
  const auto n = static_cast<std::ptrdiff_t>(layout.n);
#pragma omp parallel for schedule(static) if (go_parallel(layout.n))
  for (std::ptrdiff_t pi = 0; pi < n; ++pi) {
    const auto p = static_cast<std::size_t>(pi);
    double s = 0.0;
    for (std::size_t q = layout.win_lo[p]; q < layout.win_hi[p]; ++q)
      s += w[q] * eval<P>(pairs, p, q);
    out[p] = s;
  }
}

template <typename Fn>
void dispatch(Partial partial, Fn&& fn) {
  switch (partial) {
    case Partial::Density: fn(std::integral_constant<Partial, Partial::Density>{}); break;
    case Partial::D21: fn(std::integral_constant<Partial, Partial::D21>{}); break;
    case Partial::D12: fn(std::integral_constant<Partial, Partial::D12>{}); break;
  }
}

}  // namespace

std::vector<double> window_sums(const Copula& copula, const WindowLayout& layout,
                                PairArgs args, Partial partial,
                                std::span<const double> lifetime_weights) {
  const auto sorted = sort_args(layout, args);
  const PreparedPairs pairs(copula, sorted.lifetime, sorted.truncation);
  std::vector<double> w(layout.n);
  for (std::size_t p = 0; p < layout.n; ++p)
    w[p] = lifetime_weights[layout.by_x[p]];
  std::vector<double> rows(layout.n);
  dispatch(partial, [&](auto tag) {
    window_rows<decltype(tag)::value>(pairs, layout, w, rows);
  });
  std::vector<double> out(layout.n);
  for (std::size_t q = 0; q < layout.n; ++q) out[layout.by_u[q]] = rows[q];
  return out;
}

std::vector<double> lifetime_sums(const Copula& copula,
                                  const WindowLayout& layout, PairArgs args,
                                  Partial partial,
                                  std::span<const double> window_weights) {
  const auto sorted = sort_args(layout, args);
  const PreparedPairs pairs(copula, sorted.lifetime, sorted.truncation);
  std::vector<double> w(layout.n);
  for (std::size_t q = 0; q < layout.n; ++q)
    w[q] = window_weights[layout.by_u[q]];
  std::vector<double> rows(layout.n);
  dispatch(partial, [&](auto tag) {
    lifetime_rows<decltype(tag)::value>(pairs, layout, w, rows);
  });
  std::vector<double> out(layout.n);
  for (std::size_t p = 0; p < layout.n; ++p) out[layout.by_x[p]] = rows[p];
  return out;
}

double total_mass(const Copula& copula, const WindowLayout& layout,
                  PairArgs args, std::span<const double> f,
                  std::span<const double> k) {
  const auto sorted = sort_args(layout, args);
  const PreparedPairs pairs(copula, sorted.lifetime, sorted.truncation);
  std::vector<double> w(layout.n);
  for (std::size_t p = 0; p < layout.n; ++p) w[p] = f[layout.by_x[p]];
  std::vector<double> rows(layout.n);
  window_rows<Partial::Density>(pairs, layout, w, rows);
  double s = 0.0;
  for (std::size_t q = 0; q < layout.n; ++q) s += k[layout.by_u[q]] * rows[q];
  return s;
}

}  // namespace dtcopula::kernels::parallel
