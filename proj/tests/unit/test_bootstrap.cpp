#include <gtest/gtest.h>

#include <omp.h>

#include <algorithm>
#include <cmath>

#include "dtcopula/bootstrap.hpp"
#include "dtcopula/error.hpp"
#include "dtcopula/simulation.hpp"
#include "fixtures.hpp"

using namespace dtcopula;

namespace {

ObservedSample to_sample(const oracle::Data& d) { return ObservedSample(d.u, d.x, d.phi); }

FitResult uniform_fit(std::size_t n, Family fam, double theta) {
  FitResult r;
  r.family = fam;
  r.theta_hat = theta;
  r.converged = true;
  r.masses = {std::vector<double>(n, 1.0 / n), std::vector<double>(n, 1.0 / n)};
  return r;
}

}  // namespace

TEST(Resample, SingleAtomIsCopiedEveryTime) {
  const ObservedSample s({0.2}, {0.5}, 1.0);
  const FitResult r = uniform_fit(1, Family::Frank, 4.0);
  Rng rng(1);
  const auto rs = resample(r, s, rng);
  EXPECT_EQ(rs.rejected, 0u);
  ASSERT_EQ(rs.sample.size(), 1u);
  EXPECT_EQ(rs.sample.u(0), 0.2);
  EXPECT_EQ(rs.sample.x(0), 0.5);
}

TEST(Resample, AllOnesIndependenceReproducesMarginals) {
  const auto d = fixtures::all_ones_data(1000, 2);
  const ObservedSample s = to_sample(d);
  const auto fit_r = fit(s, Family::Independence, Algorithm::Simple);
  const auto est = distribution_estimates(fit_r, s);
  Rng rng(3);
  const auto rs = resample(fit_r, s, rng);
  EXPECT_EQ(rs.rejected, 0u);
  ASSERT_EQ(rs.sample.size(), 1000u);
  const StepFunction fx(rs.sample.lifetimes(), std::vector<double>(1000, 1e-3));
  const StepFunction gu(rs.sample.truncation_times(), std::vector<double>(1000, 1e-3));
  double dev = 0.0;
  for (std::size_t i = 0; i < 1000; ++i) {
    dev = std::max(dev, std::abs(fx(s.x(i)) - est.lifetime(s.x(i))));
    dev = std::max(dev, std::abs(gu(s.u(i)) - est.truncation(s.u(i))));
  }
  EXPECT_LE(dev, 0.05);
}

TEST(Resample, RejectionRateTracksModelTruncation) {
  Rng rng(4);
  const auto g = generate_sample(find_model("1.1", 250), rng);
  const auto r = fit(g.sample, Family::FGM, Algorithm::Simple);
  std::size_t rejected = 0, accepted = 0;
  for (int b = 0; b < 20; ++b) {
    const auto rs = resample(r, g.sample, rng);
    rejected += rs.rejected;
    accepted += rs.sample.size();
  }
  const double rate = double(rejected) / double(rejected + accepted);
  // Same order as the model's truncation proportion (about 13%).
  EXPECT_GT(rate, 0.13 / 3);
  EXPECT_LT(rate, 0.13 * 3);
}

TEST(Resample, ExhaustedBudgetIsASamplingError) {
  // Support points chosen so no (X, U) combination is observable except the
  // originals, which the copula almost never pairs.
  const ObservedSample s({0.0, 10.0}, {0.1, 10.1}, 0.5);
  const FitResult r = uniform_fit(2, Family::Frank, -40.0);
  Rng rng(5);
  EXPECT_THROW(resample(r, s, rng, 1), SamplingError);
}

TEST(Bootstrap, IdenticalResamplesGiveZeroSe) {
  Rng rng(6);
  const auto g = generate_sample(find_model("1.2", 80), rng);
  const auto r = fit(g.sample, Family::FGM, Algorithm::Simple);
  BootstrapOptions o;
  o.replicates = 2;
  o.seed = 9;
  o.seed_schedule = [](std::uint64_t, std::size_t) { return std::uint64_t{42}; };
  const auto rep = bootstrap_se(r, g.sample, o);
  EXPECT_EQ(rep.replicates, 2u);
  EXPECT_EQ(rep.se_theta, 0.0);
  for (double v : rep.se_f) EXPECT_EQ(v, 0.0);
  for (double v : rep.se_k) EXPECT_EQ(v, 0.0);
}

// Invariants: determinism, thread-count independence, symmetric interval.
TEST(Bootstrap, DeterministicAcrossThreadCounts) {
  Rng rng(7);
  const auto g = generate_sample(find_model("1.1", 60), rng);
  const auto r = fit(g.sample, Family::FGM, Algorithm::Simple);
  BootstrapOptions o;
  o.replicates = 12;
  o.seed = 123;
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const auto a = bootstrap_se(r, g.sample, o);
  omp_set_num_threads(4);
  const auto b = bootstrap_se(r, g.sample, o);
  const auto c = bootstrap_se(r, g.sample, o);
  omp_set_num_threads(saved);
  EXPECT_EQ(a.replicate_thetas, b.replicate_thetas);
  EXPECT_EQ(b.replicate_thetas, c.replicate_thetas);
  EXPECT_EQ(a.se_theta, b.se_theta);
  EXPECT_EQ(a.se_f, b.se_f);
  EXPECT_EQ(a.rejected_total, b.rejected_total);
  EXPECT_EQ(a.seed, 123u);

  EXPECT_EQ(a.replicates, 12u);
  EXPECT_EQ(a.replicate_thetas.size(), 12u);
  EXPECT_EQ(a.attempts, a.replicates + a.failures);
  EXPECT_GE(a.se_theta, 0.0);
  EXPECT_NEAR(a.ci_theta.first, a.theta_hat - 1.96 * a.se_theta, 1e-12);
  EXPECT_NEAR(a.ci_theta.second, a.theta_hat + 1.96 * a.se_theta, 1e-12);
  EXPECT_NEAR(a.theta_hat - a.ci_theta.first, a.ci_theta.second - a.theta_hat, 1e-12);

  // se_theta is the sample sd of exactly B replicate estimates.
  double mean = 0.0;
  for (double t : a.replicate_thetas) mean += t / 12.0;
  double ss = 0.0;
  for (double t : a.replicate_thetas) ss += (t - mean) * (t - mean);
  EXPECT_NEAR(a.se_theta, std::sqrt(ss / 11.0), 1e-12);
}

TEST(Bootstrap, ReportsQuantilePointsOfTheOriginalFit) {
  Rng rng(8);
  const auto g = generate_sample(find_model("1.3", 70), rng);
  const auto r = fit(g.sample, Family::FGM, Algorithm::Simple);
  const auto est = distribution_estimates(r, g.sample);
  BootstrapOptions o;
  o.replicates = 4;
  const auto rep = bootstrap_se(r, g.sample, o);
  ASSERT_EQ(rep.quantiles.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(rep.f_points[i], est.lifetime.quantile(rep.quantiles[i]));
    EXPECT_EQ(rep.k_points[i], est.truncation.quantile(rep.quantiles[i]));
    EXPECT_GE(rep.se_f[i], 0.0);
    EXPECT_GE(rep.se_k[i], 0.0);
  }
}

TEST(Bootstrap, RejectsBadOptions) {
  const auto d = fixtures::random_data(10, 0.6, 9);
  const ObservedSample s = to_sample(d);
  const auto r = fit(s, Family::Independence, Algorithm::Simple);
  BootstrapOptions o;
  o.replicates = 1;
  EXPECT_THROW(bootstrap_se(r, s, o), ValidationError);
  o.replicates = 0;
  EXPECT_THROW(bootstrap_se(r, s, o), ValidationError);
  o.replicates = 5;
  o.quantiles = {0.5, 1.0};
  EXPECT_THROW(bootstrap_se(r, s, o), ValidationError);
}

TEST(Bootstrap, TooManyFailuresRaise) {
  Rng rng(10);
  const auto g = generate_sample(find_model("1.3", 60), rng);
  const auto r = fit(g.sample, Family::FGM, Algorithm::Simple);
  BootstrapOptions o;
  o.replicates = 3;
  o.fit.max_outer = 1;  // every refit stops unconverged
  o.fit.tol = 1e-15;
  try {
    bootstrap_se(r, g.sample, o);
    FAIL();
  } catch (const ReplicationError& e) {
    EXPECT_GT(e.failures(), 3u);
  }
}
