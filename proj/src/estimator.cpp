#include "dtcopula/estimator.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "dtcopula/error.hpp"
#include "dtcopula/optimize.hpp"

namespace dtcopula {

std::string_view to_string(Algorithm algorithm) {
  return algorithm == Algorithm::Simple ? "simple" : "full";
}

Algorithm parse_algorithm(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (s == "simple") return Algorithm::Simple;
  if (s == "full") return Algorithm::Full;
  throw ValidationError("unknown algorithm '" + std::string(name) +
                        "' (expected simple or full)");
}

namespace {

// out[i] = sum of values over records tied with or below record i in the
// sorted order described by (order, tie_last).
std::vector<double> cumulative_at_or_below(std::span<const double> values,
                                           const std::vector<std::size_t>& order,
                                           const std::vector<std::size_t>& tie_last) {
  const std::size_t n = values.size();
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t p = 0; p < n; ++p) prefix[p + 1] = prefix[p] + values[order[p]];
  std::vector<double> out(n);
  for (std::size_t p = 0; p < n; ++p) out[order[p]] = prefix[tie_last[p] + 1];
  return out;
}

// out[i] = sum of values over records tied with or above record i.
std::vector<double> cumulative_at_or_above(std::span<const double> values,
                                           const std::vector<std::size_t>& order,
                                           const std::vector<std::size_t>& tie_first) {
  const std::size_t n = values.size();
  std::vector<double> suffix(n + 1, 0.0);
  for (std::size_t p = n; p-- > 0;) suffix[p] = suffix[p + 1] + values[order[p]];
  std::vector<double> out(n);
  for (std::size_t p = 0; p < n; ++p) out[order[p]] = suffix[tie_first[p]];
  return out;
}

// Reductions run in a sorted order of the data rather than record order, so
// permuting the records leaves every floating-point result unchanged.
std::vector<double> normalized_reciprocal(const std::vector<double>& denom,
                                          const std::vector<std::size_t>& order,
                                          const char* what) {
  std::vector<double> out(denom.size());
  for (std::size_t i = 0; i < denom.size(); ++i) {
    if (!(denom[i] > 0.0) || !std::isfinite(denom[i])) {
      std::ostringstream os;
      os << what << " not positive at record " << i << " (" << denom[i] << ")";
      throw DegeneracyError(os.str(), i, denom[i]);
    }
    out[i] = 1.0 / denom[i];
  }
  double total = 0.0;
  for (std::size_t i : order) total += out[i];
  for (double& v : out) v /= total;
  return out;
}

double dot(std::span<const double> a, std::span<const double> b,
           const std::vector<std::size_t>& order) {
  double s = 0.0;
  for (std::size_t i : order) s += a[i] * b[i];
  return s;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

WeightedState::WeightedState(const kernels::Kernels& kernels, Copula copula,
                             MassVectors masses)
    : kernels_(&kernels),
      copula_(copula),
      scale_(static_cast<double>(masses.f.size()) /
             static_cast<double>(masses.f.size() + 1)),
      f_(std::move(masses.f)),
      k_(std::move(masses.k)) {
  refresh_f();
  refresh_k();
}

void WeightedState::set_f(std::vector<double> f) {
  f_ = std::move(f);
  refresh_f();
}

void WeightedState::set_k(std::vector<double> k) {
  k_ = std::move(k);
  refresh_k();
}

void WeightedState::refresh_f() {
  const auto& layout = kernels_->layout();
  big_f_ = cumulative_at_or_below(f_, layout.by_x, layout.x_tie_last);
  life_args_.resize(big_f_.size());
  for (std::size_t i = 0; i < big_f_.size(); ++i) life_args_[i] = scale_ * big_f_[i];
}

void WeightedState::refresh_k() {
  const auto& layout = kernels_->layout();
  big_k_ = cumulative_at_or_below(k_, layout.by_u, layout.u_tie_last);
  trunc_args_.resize(big_k_.size());
  for (std::size_t i = 0; i < big_k_.size(); ++i) trunc_args_[i] = scale_ * big_k_[i];
}

double WeightedState::loglik_at(const Copula& copula) const {
  const std::size_t n = size();
  double ll = 0.0;
  for (std::size_t i : kernels_->layout().by_x) {
    const double w = copula.density(life_args_[i], trunc_args_[i]);
    if (!(w > 0.0) || !std::isfinite(w)) {
      std::ostringstream os;
      os << "diagonal weight W_ii not positive at record " << i << " (" << w << ")";
      throw DegeneracyError(os.str(), i, w);
    }
    ll += std::log(f_[i]) + std::log(k_[i]) + std::log(w);
  }
  const double alpha = kernels_->total_mass(copula, args(), f_, k_);
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw DegeneracyError("normalizing sum not positive", 0, alpha);
  return ll - static_cast<double>(n) * std::log(alpha);
}

double loglik(const ObservedSample& sample, const TruncationMatrix& j,
              const Copula& copula, const MassVectors& masses) {
  const std::size_t n = sample.size();
  const double s = static_cast<double>(n) / static_cast<double>(n + 1);
  std::vector<double> big_f(n, 0.0), big_k(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t m = 0; m < n; ++m) {
      if (sample.x(m) <= sample.x(i)) big_f[i] += masses.f[m];
      if (sample.u(m) <= sample.u(i)) big_k[i] += masses.k[m];
    }
  double ll = 0.0, alpha = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = copula.density(s * big_f[i], s * big_k[i]);
    if (!(w > 0.0)) throw DegeneracyError("diagonal weight W_ii not positive", i, w);
    ll += std::log(masses.f[i]) + std::log(masses.k[i]) + std::log(w);
  }
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t jj = 0; jj < n; ++jj)
      if (j(m, jj))
        alpha += copula.density(s * big_f[jj], s * big_k[m]) * masses.f[jj] * masses.k[m];
  if (!(alpha > 0.0)) throw DegeneracyError("normalizing sum not positive", 0, alpha);
  return ll - static_cast<double>(n) * std::log(alpha);
}

std::vector<double> update_k_simple(const WeightedState& state) {
  const auto fw = state.kernels().window_sums(state.copula(), state.args(),
                                              Partial::Density, state.f());
  return normalized_reciprocal(fw, state.kernels().layout().by_u, "weighted window sum F^w");
}

std::vector<double> update_f_simple(const WeightedState& state) {
  const auto kw = state.kernels().lifetime_sums(state.copula(), state.args(),
                                                Partial::Density, state.k());
  return normalized_reciprocal(kw, state.kernels().layout().by_x, "weighted lifetime sum K^w");
}

std::vector<double> update_k_full(const WeightedState& state, FullScore form) {
  const auto& kern = state.kernels();
  const auto& layout = kern.layout();
  const auto& cop = state.copula();
  const std::size_t n = state.size();
  const double nn = static_cast<double>(n);
  const double s = state.corner_scale();

  const auto fw = kern.window_sums(cop, state.args(), Partial::Density, state.f());
  const double alpha = dot(state.k(), fw, layout.by_u);
  // S_j = sum_i J(j, i) c12(F_i, K_j) f_i, then C_m = s sum_{U_j >= U_m} k_j S_j
  const auto s12 = kern.window_sums(cop, state.args(), Partial::D12, state.f());
  std::vector<double> ks(n), diag(n);
  const auto la = state.args().lifetime;
  const auto ta = state.args().truncation;
  for (std::size_t i = 0; i < n; ++i) {
    ks[i] = state.k()[i] * s12[i];
    diag[i] = cop.d12(la[i], ta[i]) / cop.density(la[i], ta[i]);
  }
  auto c = cumulative_at_or_above(ks, layout.by_u, layout.u_tie_first);
  auto d = cumulative_at_or_above(diag, layout.by_u, layout.u_tie_first);
  for (std::size_t i = 0; i < n; ++i) {
    c[i] *= s;
    d[i] *= s;
  }
  double lambda = 0.0;
  if (form == FullScore::Constrained)
    lambda = dot(state.k(), d, layout.by_u) - nn * dot(state.k(), c, layout.by_u) / alpha;
  std::vector<double> denom(n);
  for (std::size_t m = 0; m < n; ++m)
    denom[m] = nn * c[m] + nn * fw[m] - alpha * d[m] + alpha * lambda;
  return normalized_reciprocal(denom, layout.by_u, "full-score denominator for k");
}

std::vector<double> update_f_full(const WeightedState& state, FullScore form) {
  const auto& kern = state.kernels();
  const auto& layout = kern.layout();
  const auto& cop = state.copula();
  const std::size_t n = state.size();
  const double nn = static_cast<double>(n);
  const double s = state.corner_scale();

  const auto kw = kern.lifetime_sums(cop, state.args(), Partial::Density, state.k());
  const double alpha = dot(state.f(), kw, layout.by_x);
  // R_i = sum_j J(j, i) c21(F_i, K_j) k_j, then A_m = s sum_{X_i >= X_m} f_i R_i
  const auto r21 = kern.lifetime_sums(cop, state.args(), Partial::D21, state.k());
  std::vector<double> fr(n), diag(n);
  const auto la = state.args().lifetime;
  const auto ta = state.args().truncation;
  for (std::size_t i = 0; i < n; ++i) {
    fr[i] = state.f()[i] * r21[i];
    diag[i] = cop.d21(la[i], ta[i]) / cop.density(la[i], ta[i]);
  }
  auto a = cumulative_at_or_above(fr, layout.by_x, layout.x_tie_first);
  auto b = cumulative_at_or_above(diag, layout.by_x, layout.x_tie_first);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] *= s;
    b[i] *= s;
  }
  double lambda = 0.0;
  if (form == FullScore::Constrained)
    lambda = dot(state.f(), b, layout.by_x) - nn * dot(state.f(), a, layout.by_x) / alpha;
  std::vector<double> denom(n);
  for (std::size_t m = 0; m < n; ++m)
    denom[m] = nn * a[m] + nn * kw[m] - alpha * b[m] + alpha * lambda;
  return normalized_reciprocal(denom, layout.by_x, "full-score denominator for f");
}

namespace {

struct Candidate {
  double x = 0.0;
  double value = -std::numeric_limits<double>::infinity();
};

// Brent over the parts of [lo, hi] that intersect the domain.
Candidate refine(const std::function<double(double)>& profile,
                 std::span<const ThetaInterval> domain, double lo, double hi,
                 double tol) {
  Candidate best;
  for (const auto& iv : domain) {
    const double a = std::max(lo, iv.lo);
    const double b = std::min(hi, iv.hi);
    if (a > b) continue;
    const auto r = maximize_bounded(profile, a, b, tol);
    if (r.value > best.value) best = {r.x, r.value};
  }
  return best;
}

double snap_into(std::span<const ThetaInterval> domain, double x) {
  double best = x, dist = std::numeric_limits<double>::infinity();
  for (const auto& iv : domain) {
    const double c = std::clamp(x, iv.lo, iv.hi);
    if (std::abs(c - x) < dist) {
      dist = std::abs(c - x);
      best = c;
    }
  }
  return best;
}

}  // namespace

ThetaUpdate maximize_profile(const std::function<double(double)>& profile,
                             std::span<const ThetaInterval> domain,
                             std::optional<double> warm_start, double tol) {
  if (domain.empty()) throw ValidationError("empty theta search domain");
  const double lo = domain.front().lo;
  const double hi = domain.back().hi;
  constexpr int kGrid = 21;
  const double spacing = (hi - lo) / (kGrid - 1);

  Candidate best;
  if (!warm_start) {
    std::vector<double> grid;
    for (int g = 0; g < kGrid; ++g) {
      const double t = lo + spacing * g;
      const double snapped = snap_into(domain, t);
      grid.push_back(snapped);
      // A grid point inside a gap is tried on both sides of it.
      for (const auto& iv : domain)
        if (snapped != t && std::abs(std::clamp(t, iv.lo, iv.hi) - t) ==
                                std::abs(snapped - t) &&
            std::clamp(t, iv.lo, iv.hi) != snapped)
          grid.push_back(std::clamp(t, iv.lo, iv.hi));
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    std::size_t arg = 0;
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const double v = profile(grid[g]);
      if (std::isfinite(v) && v > top) {
        top = v;
        arg = g;
      }
    }
    if (!std::isfinite(top))
      throw DegeneracyError("profile likelihood non-finite on the whole scan", 0, top);
    const double a = grid[arg == 0 ? 0 : arg - 1];
    const double b = grid[std::min(arg + 1, grid.size() - 1)];
    best = refine(profile, domain, a, b, tol);
    if (top > best.value) best = {grid[arg], top};
  } else {
    double center = snap_into(domain, *warm_start);
    double half = spacing;
    for (int slide = 0; slide < 50; ++slide) {
      const double a = std::max(lo, center - half);
      const double b = std::min(hi, center + half);
      const auto c = refine(profile, domain, a, b, tol);
      if (!std::isfinite(c.value))
        throw DegeneracyError("profile likelihood non-finite near warm start", 0, c.value);
      best = c;
      const bool at_a = c.x - a <= 10.0 * tol && a > lo;
      const bool at_b = b - c.x <= 10.0 * tol && b < hi;
      if (!at_a && !at_b) break;
      center = c.x;
      half *= 2.0;
    }
  }
  const bool edge = std::abs(best.x - lo) <= 1e-9 || std::abs(best.x - hi) <= 1e-9;
  return {best.x, best.value, edge};
}

ThetaUpdate update_theta(const WeightedState& state, Family family,
                         std::span<const ThetaInterval> domain,
                         std::optional<double> warm_start) {
  auto profile = [&](double theta) {
    try {
      return state.loglik_at(Copula(family, theta));
    } catch (const DegeneracyError&) {
      return -std::numeric_limits<double>::infinity();
    }
  };
  return maximize_profile(profile, domain, warm_start);
}

FitResult fit(const ObservedSample& sample, Family family, Algorithm algorithm,
              const FitOptions& options) {
  FitResult result;
  result.family = family;
  result.algorithm = algorithm;

  EfronPetrosianOptions init = options.initializer;
  if (init.tol > options.tol) init.tol = options.tol;
  auto start = efron_petrosian(sample, init);

  const kernels::Kernels kern(sample, options.backend);
  if (family == Family::Independence) {
    // W == 1: the mass updates of both algorithms are the Efron-Petrosian
    // step, so its converged output is already the fixed point.
    WeightedState state(kern, Copula::independence(), start.masses);
    result.masses = std::move(start.masses);
    result.loglik = state.loglik();
    result.iterations = 1;
    result.converged = true;
    result.last_change_f = result.last_change_k = start.last_change;
    result.loglik_trace = {result.loglik};
    return result;
  }

  const std::vector<ThetaInterval> domain =
      options.theta_domain.empty() ? default_theta_domain(family) : options.theta_domain;
  const double placeholder = snap_into(domain, 0.5 * (domain.front().lo + domain.back().hi));
  WeightedState state(kern, Copula(family, placeholder), std::move(start.masses));

  auto theta = update_theta(state, family, domain, options.theta_init);
  state.set_copula(Copula(family, theta.theta));

  int q = 0;
  try {
    for (q = 1; q <= options.max_outer; ++q) {
      const std::vector<double> f_old(state.f().begin(), state.f().end());
      const std::vector<double> k_old(state.k().begin(), state.k().end());
      const double theta_old = theta.theta;

      state.set_k(algorithm == Algorithm::Simple
                      ? update_k_simple(state)
                      : update_k_full(state, options.full_score));
      state.set_f(algorithm == Algorithm::Simple
                      ? update_f_simple(state)
                      : update_f_full(state, options.full_score));
      theta = update_theta(state, family, domain, theta_old);
      state.set_copula(Copula(family, theta.theta));

      result.last_change_f = max_abs_diff(state.f(), f_old);
      result.last_change_k = max_abs_diff(state.k(), k_old);
      result.last_change_theta = std::abs(theta.theta - theta_old);
      result.loglik_trace.push_back(theta.loglik);
      result.iterations = q;
      if (result.last_change_f <= options.tol && result.last_change_k <= options.tol &&
          result.last_change_theta <= options.tol) {
        result.converged = true;
        break;
      }
    }
  } catch (const DegeneracyError& e) {
    std::ostringstream os;
    os << to_string(algorithm) << " algorithm, outer iteration " << q << ": "
       << e.what();
    throw DegeneracyError(os.str(), e.index(), e.value());
  }

  result.theta_hat = theta.theta;
  result.boundary_hit = theta.boundary_hit;
  result.masses = {std::vector<double>(state.f().begin(), state.f().end()),
                   std::vector<double>(state.k().begin(), state.k().end())};
  result.loglik = state.loglik();
  return result;
}

DistributionEstimates distribution_estimates(const FitResult& fit,
                                             const ObservedSample& sample) {
  return {StepFunction(sample.lifetimes(), fit.masses.f),
          StepFunction(sample.truncation_times(), fit.masses.k)};
}

}  // namespace dtcopula
