#include "dtcopula/bootstrap.hpp"

#include <cmath>
#include <optional>
#include <sstream>
#include <string>

#include "dtcopula/error.hpp"
#include "dtcopula/seeding.hpp"

namespace dtcopula {

Resample resample(const FitResult& fit, const ObservedSample& sample, Rng& rng,
                  std::size_t cap_factor) {
  const auto est = distribution_estimates(fit, sample);
  const Copula copula = fit.copula();
  const std::size_t n = sample.size();
  const std::size_t cap = cap_factor * n;
  std::vector<double> u, x;
  u.reserve(n);
  x.reserve(n);
  std::size_t rejected = 0;
  while (x.size() < n) {
    if (x.size() + rejected >= cap) {
      std::ostringstream os;
      os << "bootstrap resampling exhausted " << cap << " candidates with "
         << x.size() << " of " << n << " pairs accepted";
      throw SamplingError(os.str());
    }
    const auto [t_life, t_trunc] = copula.sample_pair(rng);
    const double xs = est.lifetime.quantile(t_life);
    const double us = est.truncation.quantile(t_trunc);
    if (observable(us, xs, sample.phi())) {
      x.push_back(xs);
      u.push_back(us);
    } else {
      ++rejected;
    }
  }
  return {ObservedSample(std::move(u), std::move(x), sample.phi()), rejected};
}

namespace {

struct Attempt {
  bool ok = false;
  std::size_t rejected = 0;
  double theta = 0.0;
  std::vector<double> f_at, k_at;
  std::string error;  // sampling failures abort the run
};

double sample_sd(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

BootstrapReport bootstrap_se(const FitResult& fit_in, const ObservedSample& sample,
                             const BootstrapOptions& options) {
  const std::size_t b_target = options.replicates;
  if (b_target < 2) throw ValidationError("bootstrap needs B >= 2 replicates");
  for (double p : options.quantiles)
    if (!(p > 0.0 && p < 1.0))
      throw ValidationError("bootstrap quantile levels must lie in (0, 1)");
  const SeedSchedule schedule =
      options.seed_schedule ? options.seed_schedule
                            : SeedSchedule([](std::uint64_t s, std::size_t a) {
                                return stream_seed(s, a);
                              });

  BootstrapReport report;
  report.seed = options.seed;
  report.theta_hat = fit_in.theta_hat;
  report.quantiles = options.quantiles;
  const auto est = distribution_estimates(fit_in, sample);
  for (double p : options.quantiles) {
    report.f_points.push_back(est.lifetime.quantile(p));
    report.k_points.push_back(est.truncation.quantile(p));
  }

  const std::size_t nq = options.quantiles.size();
  std::vector<std::vector<double>> f_vals(nq), k_vals(nq);
  std::size_t next = 0;
  while (report.replicates < b_target) {
    if (report.failures > b_target) {
      std::ostringstream os;
      os << "bootstrap: " << report.failures << " of " << report.attempts
         << " replicate refits failed";
      throw ReplicationError(os.str(), report.attempts, report.failures);
    }
    const std::size_t batch = b_target - report.replicates;
    std::vector<Attempt> attempts(batch);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < batch; ++i) {
      Attempt& at = attempts[i];
      try {
        Rng rng(schedule(options.seed, next + i));
        const Resample rs = resample(fit_in, sample, rng);
        at.rejected = rs.rejected;
        const FitResult r = fit(rs.sample, fit_in.family, fit_in.algorithm, options.fit);
        if (!r.converged) continue;
        const auto e = distribution_estimates(r, rs.sample);
        for (std::size_t q = 0; q < nq; ++q) {
          at.f_at.push_back(e.lifetime(report.f_points[q]));
          at.k_at.push_back(e.truncation(report.k_points[q]));
        }
        at.theta = r.theta_hat;
        at.ok = true;
      } catch (const SamplingError& e) {
        at.error = e.what();
      } catch (const DegeneracyError&) {
      } catch (const ConvergenceError&) {
      }
    }
    next += batch;
    for (auto& at : attempts) {
      if (!at.error.empty()) throw SamplingError(at.error);
      ++report.attempts;
      report.rejected_total += at.rejected;
      if (!at.ok) {
        ++report.failures;
        continue;
      }
      ++report.replicates;
      report.replicate_thetas.push_back(at.theta);
      for (std::size_t q = 0; q < nq; ++q) {
        f_vals[q].push_back(at.f_at[q]);
        k_vals[q].push_back(at.k_at[q]);
      }
    }
  }

  report.se_theta = sample_sd(report.replicate_thetas);
  report.ci_theta = {report.theta_hat - 1.96 * report.se_theta,
                     report.theta_hat + 1.96 * report.se_theta};
  for (std::size_t q = 0; q < nq; ++q) {
    report.se_f.push_back(sample_sd(f_vals[q]));
    report.se_k.push_back(sample_sd(k_vals[q]));
  }
  return report;
}

}  // namespace dtcopula
