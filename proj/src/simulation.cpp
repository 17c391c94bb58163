#include "dtcopula/simulation.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <sstream>

#include "dtcopula/error.hpp"
#include "dtcopula/npmle.hpp"
#include "dtcopula/seeding.hpp"

namespace dtcopula {

const std::vector<ModelSpec>& model_catalog() {
  static const std::vector<ModelSpec> catalog = {
      {"Model 1.1", Family::FGM, -1.0},     {"Model 1.2", Family::FGM, -0.5},
      {"Model 1.3", Family::FGM, 1.0},      {"Model 2.1", Family::Frank, -2.1},
      {"Model 2.2", Family::Frank, -1.0},   {"Model 2.3", Family::Frank, 1.86},
      {"Model 2.4", Family::Frank, 5.74},   {"Model 2.5", Family::Frank, 20.9},
      {"Model 3.1", Family::Clayton, 0.5},  {"Model 3.2", Family::Clayton, 2.0},
      {"Model 3.3", Family::Clayton, 18.0},
  };
  return catalog;
}

ModelSpec find_model(std::string_view label, std::size_t n) {
  std::string key(label);
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (key.rfind("model", 0) == 0) key.erase(0, 5);
  key.erase(std::remove_if(key.begin(), key.end(),
                           [](unsigned char c) { return std::isspace(c); }),
            key.end());
  for (const auto& m : model_catalog()) {
    if (m.label.substr(6) == key) {
      ModelSpec out = m;
      out.n = n;
      return out;
    }
  }
  std::ostringstream os;
  os << "unknown model label '" << label << "'; valid labels:";
  for (const auto& m : model_catalog()) os << " \"" << m.label << "\"";
  throw ValidationError(os.str());
}

void validate_model(const ModelSpec& model) {
  if (model.n == 0) throw ValidationError("model sample size must be >= 1");
  if (!(model.phi > 0.0) || !std::isfinite(model.phi))
    throw ValidationError("model window length phi must be positive");
  if (!std::isfinite(model.u_shift)) throw ValidationError("model u_shift must be finite");
  try {
    Copula(model.family, model.theta);
  } catch (const DomainError& e) {
    throw ValidationError(e.what());
  }
}

double GeneratedSample::truncation_proportion() const {
  const std::size_t total = accepted + rejected;
  return total ? static_cast<double>(rejected) / static_cast<double>(total) : 0.0;
}

GeneratedSample generate_sample(const ModelSpec& model, Rng& rng,
                                std::size_t cap_factor) {
  validate_model(model);
  const Copula copula(model.family, model.theta);
  const std::size_t cap = cap_factor * model.n;
  std::vector<double> u, x;
  u.reserve(model.n);
  x.reserve(model.n);
  std::size_t rejected = 0;
  while (x.size() < model.n) {
    if (x.size() + rejected >= cap) {
      std::ostringstream os;
      os << model.label << ": candidate cap " << cap << " exhausted with "
         << x.size() << " of " << model.n << " pairs accepted";
      throw SamplingError(os.str());
    }
    const auto [a, b] = copula.sample_pair(rng);
    const double xs = a;
    const double us = b + model.u_shift;
    if (observable(us, xs, model.phi)) {
      x.push_back(xs);
      u.push_back(us);
    } else {
      ++rejected;
    }
  }
  GeneratedSample out{ObservedSample(std::move(u), std::move(x), model.phi), model.n,
                      rejected};
  return out;
}

TruncationCount count_truncation(const ModelSpec& model, std::size_t candidates,
                                 Rng& rng) {
  validate_model(model);
  const Copula copula(model.family, model.theta);
  TruncationCount out;
  out.candidates = candidates;
  for (std::size_t c = 0; c < candidates; ++c) {
    const auto [a, b] = copula.sample_pair(rng);
    if (!observable(b + model.u_shift, a, model.phi)) ++out.rejected;
  }
  return out;
}

double empirical_kendall_tau(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  if (n < 2 || b.size() != n) throw ValidationError("kendall tau needs two equal samples of size >= 2");
  long long score = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double s = (a[i] - a[j]) * (b[i] - b[j]);
      score += (s > 0) - (s < 0);
    }
  return static_cast<double>(score) / (0.5 * static_cast<double>(n) * (n - 1));
}

const AlgorithmSummary& ExperimentReport::summary(Algorithm algorithm) const {
  for (const auto& s : algorithms)
    if (s.algorithm == algorithm) return s;
  throw ValidationError("algorithm '" + std::string(to_string(algorithm)) +
                        "' was not run in this experiment");
}

namespace {

struct ReplicateOutcome {
  std::size_t rejected = 0;
  bool generated = false;
  // Per requested algorithm.
  std::vector<bool> ok;
  std::vector<bool> converged;
  std::vector<double> theta;
  std::vector<DecileArray> f_at, k_at;
  bool ep_ok = false;
  DecileArray ep_f_at{};
};

struct Accumulator {
  std::size_t count = 0;
  DecileArray sum_err{}, sum_sq{};
  void add(const DecileArray& est, const DecileArray& truth) {
    ++count;
    for (std::size_t d = 0; d < kDeciles; ++d) {
      const double e = est[d] - truth[d];
      sum_err[d] += e;
      sum_sq[d] += e * e;
    }
  }
  DecileArray mse() const {
    DecileArray out{};
    for (std::size_t d = 0; d < kDeciles; ++d) out[d] = count ? sum_sq[d] / count : 0.0;
    return out;
  }
  DecileArray bias() const {
    DecileArray out{};
    for (std::size_t d = 0; d < kDeciles; ++d) out[d] = count ? sum_err[d] / count : 0.0;
    return out;
  }
};

ReplicateOutcome run_replicate(const ModelSpec& model, std::uint64_t seed,
                               const ExperimentOptions& options,
                               const DecileArray& xq, const DecileArray& uq) {
  ReplicateOutcome out;
  const std::size_t na = options.algorithms.size();
  out.ok.assign(na, false);
  out.converged.assign(na, false);
  out.theta.assign(na, 0.0);
  out.f_at.assign(na, {});
  out.k_at.assign(na, {});

  Rng rng(seed);
  const GeneratedSample gen = generate_sample(model, rng);
  out.rejected = gen.rejected;
  out.generated = true;

  for (std::size_t a = 0; a < na; ++a) {
    try {
      const FitResult r = fit(gen.sample, model.family, options.algorithms[a], options.fit);
      const auto est = distribution_estimates(r, gen.sample);
      for (std::size_t d = 0; d < kDeciles; ++d) {
        out.f_at[a][d] = est.lifetime(xq[d]);
        out.k_at[a][d] = est.truncation(uq[d]);
      }
      out.theta[a] = r.theta_hat;
      out.converged[a] = r.converged;
      out.ok[a] = true;
    } catch (const DegeneracyError&) {
    } catch (const ConvergenceError&) {
    }
  }
  if (options.independence_comparator) {
    try {
      EfronPetrosianOptions ep;
      ep.tol = std::min(options.fit.tol, options.fit.initializer.tol);
      ep.max_iter = options.fit.initializer.max_iter;
      const auto r = efron_petrosian(gen.sample, ep);
      const StepFunction fhat(gen.sample.lifetimes(), r.masses.f);
      for (std::size_t d = 0; d < kDeciles; ++d) out.ep_f_at[d] = fhat(xq[d]);
      out.ep_ok = true;
    } catch (const DegeneracyError&) {
    } catch (const ConvergenceError&) {
    }
  }
  return out;
}

}  // namespace

ExperimentReport run_experiment(const ModelSpec& model, std::size_t replicates,
                                std::uint64_t seed, const ExperimentOptions& options) {
  validate_model(model);
  if (replicates == 0) throw ValidationError("replicates must be >= 1");
  if (options.algorithms.empty()) throw ValidationError("no algorithm requested");
  const auto started = std::chrono::steady_clock::now();

  ExperimentReport report;
  report.model = model;
  report.replicates = replicates;
  report.seed = seed;
  for (std::size_t d = 0; d < kDeciles; ++d) {
    const double p = 0.1 * static_cast<double>(d + 1);
    report.probabilities[d] = p;
    report.x_deciles[d] = p;
    report.u_deciles[d] = model.u_shift + p;
  }

  std::vector<ReplicateOutcome> outcomes(replicates);
  std::vector<std::string> sampling_errors(replicates);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t r = 0; r < replicates; ++r) {
    try {
      outcomes[r] = run_replicate(model, stream_seed(seed, r), options,
                                  report.x_deciles, report.u_deciles);
    } catch (const SamplingError& e) {
      sampling_errors[r] = e.what();
    }
  }
  for (const auto& msg : sampling_errors)
    if (!msg.empty()) throw SamplingError(msg);

  // Aggregation runs serially in replicate order.
  const std::size_t na = options.algorithms.size();
  std::size_t rejected = 0;
  for (const auto& o : outcomes) rejected += o.rejected;
  report.truncation_proportion =
      static_cast<double>(rejected) /
      static_cast<double>(rejected + replicates * model.n);

  const DecileArray& pf = report.probabilities;
  for (std::size_t a = 0; a < na; ++a) {
    AlgorithmSummary s;
    s.algorithm = options.algorithms[a];
    Accumulator accf, acck;
    for (const auto& o : outcomes) {
      if (!o.ok[a]) {
        ++s.failures;
        continue;
      }
      ++s.successes;
      if (!o.converged[a]) ++s.nonconverged;
      s.thetas.push_back(o.theta[a]);
      accf.add(o.f_at[a], pf);
      acck.add(o.k_at[a], pf);
    }
    if (5 * s.failures > replicates) {
      std::ostringstream os;
      os << model.label << ", " << to_string(s.algorithm) << " algorithm: "
         << s.failures << " of " << replicates << " replicates failed";
      throw ReplicationError(os.str(), replicates, s.failures);
    }
    double sum = 0.0;
    for (double t : s.thetas) sum += t;
    s.theta_mean = s.successes ? sum / static_cast<double>(s.successes) : 0.0;
    s.theta_bias = s.theta_mean - model.theta;
    double ss = 0.0;
    for (double t : s.thetas) ss += (t - s.theta_mean) * (t - s.theta_mean);
    s.theta_sd = s.successes > 1 ? std::sqrt(ss / static_cast<double>(s.successes - 1)) : 0.0;
    s.mse_f = accf.mse();
    s.bias_f = accf.bias();
    s.mse_k = acck.mse();
    s.bias_k = acck.bias();
    report.algorithms.push_back(std::move(s));
  }

  const auto simple = std::find(options.algorithms.begin(), options.algorithms.end(),
                                Algorithm::Simple);
  const auto full = std::find(options.algorithms.begin(), options.algorithms.end(),
                              Algorithm::Full);
  if (simple != options.algorithms.end() && full != options.algorithms.end()) {
    const auto& ms = report.algorithms[simple - options.algorithms.begin()].mse_f;
    const auto& mf = report.algorithms[full - options.algorithms.begin()].mse_f;
    DecileArray rel{};
    for (std::size_t d = 0; d < kDeciles; ++d) rel[d] = (ms[d] - mf[d]) / mf[d];
    report.relative_mse_f = rel;
  }

  if (options.independence_comparator) {
    ComparatorSummary c;
    Accumulator acc;
    for (const auto& o : outcomes) {
      if (!o.ep_ok) {
        ++c.failures;
        continue;
      }
      ++c.successes;
      acc.add(o.ep_f_at, pf);
    }
    c.mse_f = acc.mse();
    c.bias_f = acc.bias();
    report.independence = c;
  }

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

}  // namespace dtcopula
