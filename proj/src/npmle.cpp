#include "dtcopula/npmle.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "dtcopula/error.hpp"

namespace dtcopula {

namespace {

// Interval sums over sorted positions via one prefix pass.
class PrefixSums {
 public:
  explicit PrefixSums(std::size_t n) : acc_(n + 1, 0.0) {}
  void assign(const std::vector<double>& sorted) {
    for (std::size_t i = 0; i < sorted.size(); ++i)
      acc_[i + 1] = acc_[i] + sorted[i];
  }
  double range(std::size_t lo, std::size_t hi) const { return acc_[hi] - acc_[lo]; }

 private:
  std::vector<double> acc_;
};

// The total is accumulated in sorted order so results do not depend on how
// the records are numbered.
void normalize_inverse(std::vector<double>& v, const std::vector<std::size_t>& order) {
  for (double& x : v) x = 1.0 / x;
  double s = 0.0;
  for (std::size_t i : order) s += v[i];
  for (double& x : v) x /= s;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

double independence_loglik(const TruncationMatrix& j, const MassVectors& masses) {
  const std::size_t n = j.size();
  double ll = 0.0, total = 0.0;
  for (std::size_t m = 0; m < n; ++m) {
    ll += std::log(masses.f[m]) + std::log(masses.k[m]);
    double row = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (j(m, i)) row += masses.f[i];
    total += masses.k[m] * row;
  }
  return ll - static_cast<double>(n) * std::log(total);
}

EfronPetrosianResult efron_petrosian(const ObservedSample& sample,
                                     const EfronPetrosianOptions& options) {
  const WindowLayout layout(sample);
  const std::size_t n = layout.n;
  for (std::size_t q = 0; q < n; ++q)
    if (layout.life_hi[q] == layout.life_lo[q])
      throw DegeneracyError("truncation window sees no lifetime", layout.by_u[q], 0.0);
  for (std::size_t p = 0; p < n; ++p)
    if (layout.win_hi[p] == layout.win_lo[p])
      throw DegeneracyError("lifetime lies in no truncation window", layout.by_x[p], 0.0);

  std::vector<double> f(n, 1.0 / static_cast<double>(n));
  std::vector<double> k(n, 1.0 / static_cast<double>(n));
  std::vector<double> sorted(n), next(n);
  PrefixSums prefix(n);
  std::unique_ptr<TruncationMatrix> j;
  if (options.record_trace) j = std::make_unique<TruncationMatrix>(sample);

  EfronPetrosianResult result;
  for (int it = 1; it <= options.max_iter; ++it) {
    // k_m ∝ 1 / (f-mass inside window m)
    for (std::size_t p = 0; p < n; ++p) sorted[p] = f[layout.by_x[p]];
    prefix.assign(sorted);
    for (std::size_t q = 0; q < n; ++q)
      next[layout.by_u[q]] = prefix.range(layout.life_lo[q], layout.life_hi[q]);
    normalize_inverse(next, layout.by_u);
    const double dk = max_abs_diff(next, k);
    k.swap(next);

    // f_m ∝ 1 / (k-mass of windows containing X_m)
    for (std::size_t q = 0; q < n; ++q) sorted[q] = k[layout.by_u[q]];
    prefix.assign(sorted);
    for (std::size_t p = 0; p < n; ++p)
      next[layout.by_x[p]] = prefix.range(layout.win_lo[p], layout.win_hi[p]);
    normalize_inverse(next, layout.by_x);
    const double df = max_abs_diff(next, f);
    f.swap(next);

    result.iterations = it;
    result.last_change = std::max(df, dk);
    if (j) result.loglik_trace.push_back(independence_loglik(*j, {f, k}));
    if (df <= options.tol && dk <= options.tol) {
      result.masses = {std::move(f), std::move(k)};
      return result;
    }
  }
  std::ostringstream os;
  os << "Efron-Petrosian iteration did not converge in " << options.max_iter
     << " iterations (last max change " << result.last_change << ")";
  throw ConvergenceError(os.str(), options.max_iter, result.last_change, f, k);
}

}  // namespace dtcopula
