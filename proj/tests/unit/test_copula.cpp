#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "dtcopula/copula.hpp"
#include "dtcopula/error.hpp"
#include "dtcopula/simulation.hpp"
#include "dtcopula/validate.hpp"
#include "oracle.hpp"

using namespace dtcopula;

namespace {

// int_0^x t / (e^t - 1) dt = pi^2/6 - sum_k e^{-kx} (x/k + 1/k^2), x > 0.
// Below 0.5 the tail converges too slowly; use the Bernoulli expansion.
double debye_series(double x) {
  if (x < 0.5) {
    const double x2 = x * x;
    return 1.0 - x / 4 + x2 / 36 - x2 * x2 / 3600 + x2 * x2 * x2 / 211680 -
           x2 * x2 * x2 * x2 / 10886400;
  }
  double s = std::numbers::pi * std::numbers::pi / 6.0;
  for (int k = 1; k < 2000; ++k) {
    const double term = std::exp(-k * x) * (x / k + 1.0 / (double(k) * k));
    s -= term;
    if (term < 1e-18) break;
  }
  return s / x;
}

oracle::Fam to_oracle(Family f) {
  switch (f) {
    case Family::FGM: return oracle::Fam::FGM;
    case Family::Frank: return oracle::Fam::Frank;
    case Family::Clayton: return oracle::Fam::Clayton;
    case Family::Independence: break;
  }
  return oracle::Fam::Indep;
}

// Kendall's tau as 1 - 4 int int C_u C_v du dv, with C_u, C_v from central
// differences of the cdf and a midpoint rule.
double tau_by_integral(const Copula& c) {
  const int m = 400;
  const double h = 1e-6;
  double s = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const double u = (i + 0.5) / m, v = (j + 0.5) / m;
      const double cu = (c.cdf(u + h, v) - c.cdf(u - h, v)) / (2 * h);
      const double cv = (c.cdf(u, v + h) - c.cdf(u, v - h)) / (2 * h);
      s += cu * cv;
    }
  return 1.0 - 4.0 * s / (double(m) * m);
}

}  // namespace

TEST(Copula, ParseFamilyAcceptsAliasesAndRejectsUnknown) {
  EXPECT_EQ(parse_family("FGM"), Family::FGM);
  EXPECT_EQ(parse_family("indep"), Family::Independence);
  EXPECT_EQ(parse_family("Independence"), Family::Independence);
  EXPECT_EQ(parse_family("clayton"), Family::Clayton);
  EXPECT_THROW(parse_family("gumbel"), ValidationError);
}

TEST(Copula, ParameterSpaceIsEnforced) {
  EXPECT_THROW(Copula(Family::FGM, 1.5), DomainError);
  EXPECT_THROW(Copula(Family::Frank, 0.0), DomainError);
  EXPECT_THROW(Copula(Family::Clayton, -0.5), DomainError);
  EXPECT_THROW(Copula(Family::Clayton, 0.0), DomainError);
  EXPECT_THROW(Copula(Family::Frank, std::nan("")), DomainError);
  EXPECT_NO_THROW(Copula(Family::FGM, -1.0));
  EXPECT_NO_THROW(Copula(Family::Frank, -30.0));
}

TEST(Copula, CdfRejectsArgumentsOutsideUnitSquare) {
  const Copula c(Family::Frank, 2.0);
  EXPECT_THROW(c.cdf(1.2, 0.5), DomainError);
  EXPECT_THROW(c.cdf(0.5, -0.1), DomainError);
}

TEST(Copula, CdfHasUniformMarginsAndGroundedness) {
  for (auto [fam, th] : {std::pair{Family::FGM, 0.6}, {Family::Frank, -4.0},
                         {Family::Frank, 12.0}, {Family::Clayton, 3.0}}) {
    const Copula c(fam, th);
    for (double t : {0.0, 0.1, 0.37, 0.8, 1.0}) {
      EXPECT_NEAR(c.cdf(t, 1.0), t, 1e-12) << to_string(fam) << " " << th;
      EXPECT_NEAR(c.cdf(1.0, t), t, 1e-12);
      EXPECT_NEAR(c.cdf(0.0, t), 0.0, 1e-15);
    }
  }
}

// Invariant: density is non-negative and the cdf is 2-increasing.
TEST(Copula, DensityNonNegativeAndCdfTwoIncreasing) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (auto [fam, th] : {std::pair{Family::FGM, -1.0}, {Family::FGM, 1.0}, {Family::Frank, -20.0},
                         {Family::Frank, 20.9}, {Family::Clayton, 0.5}, {Family::Clayton, 18.0}}) {
    const Copula c(fam, th);
    for (int t = 0; t < 2000; ++t) {
      double u1 = unif(rng), u2 = unif(rng), v1 = unif(rng), v2 = unif(rng);
      if (u1 > u2) std::swap(u1, u2);
      if (v1 > v2) std::swap(v1, v2);
      EXPECT_GE(c.density(u1, v1), 0.0);
      const double vol = c.cdf(u2, v2) - c.cdf(u1, v2) - c.cdf(u2, v1) + c.cdf(u1, v1);
      EXPECT_GE(vol, -1e-12) << to_string(fam) << " " << th;
    }
  }
}

TEST(Copula, DensityMatchesIndependentFormulas) {
  for (auto [fam, th] : {std::pair{Family::FGM, -0.8}, {Family::FGM, 1.0},
                         {Family::Frank, -2.1}, {Family::Frank, 5.74},
                         {Family::Clayton, 0.5}, {Family::Clayton, 4.0}}) {
    const Copula c(fam, th);
    for (double u : {0.05, 0.3, 0.55, 0.9})
      for (double v : {0.1, 0.45, 0.7, 0.95}) {
        const double ref = oracle::density(to_oracle(fam), th, u, v);
        EXPECT_NEAR(c.density(u, v), ref, 1e-10 * std::max(1.0, ref))
            << to_string(fam) << " " << th << " at " << u << "," << v;
      }
  }
}

TEST(Copula, PartialsMatchOracleDifferencesOfDensity) {
  for (auto [fam, th] : {std::pair{Family::FGM, 0.4}, {Family::Frank, 3.0},
                         {Family::Clayton, 2.0}}) {
    const Copula c(fam, th);
    for (double u : {0.2, 0.5, 0.8})
      for (double v : {0.25, 0.6}) {
        const double r21 = oracle::d21(to_oracle(fam), th, u, v);
        const double r12 = oracle::d12(to_oracle(fam), th, u, v);
        EXPECT_NEAR(c.d21(u, v), r21, 1e-6 * std::max(1.0, std::abs(r21)));
        EXPECT_NEAR(c.d12(u, v), r12, 1e-6 * std::max(1.0, std::abs(r12)));
      }
  }
}

TEST(Copula, IndependenceHasUnitDensityAndZeroPartials) {
  const Copula c = Copula::independence();
  EXPECT_DOUBLE_EQ(c.density(0.3, 0.7), 1.0);
  EXPECT_DOUBLE_EQ(c.d21(0.3, 0.7), 0.0);
  EXPECT_DOUBLE_EQ(c.d12(0.3, 0.7), 0.0);
  EXPECT_DOUBLE_EQ(c.kendall_tau(), 0.0);
}

TEST(Copula, DensityNearCornersStaysFinite) {
  for (auto [fam, th] : {std::pair{Family::Frank, 50.0}, {Family::Frank, -50.0},
                         {Family::Clayton, 50.0}, {Family::Clayton, 1e-4}}) {
    const Copula c(fam, th);
    for (double u : {0.0, 1e-12, 0.5, 1.0 - 1e-12, 1.0})
      for (double v : {0.0, 0.5, 1.0}) {
        const double d = c.density(u, v);
        EXPECT_TRUE(std::isfinite(d) && d >= 0.0) << to_string(fam) << " " << th;
        EXPECT_TRUE(std::isfinite(c.d21(u, v)));
        EXPECT_TRUE(std::isfinite(c.d12(u, v)));
      }
  }
}

TEST(Copula, PreparedPairsAgreeWithScalarMethods) {
  const std::vector<double> us{0.0, 0.01, 0.3, 0.77, 0.999, 1.0};
  const std::vector<double> vs{0.02, 0.5, 0.93};
  for (auto [fam, th] : {std::pair{Family::FGM, -0.3}, {Family::Frank, 7.0},
                         {Family::Clayton, 6.0}, {Family::Independence, 0.0}}) {
    const Copula c(fam, th);
    const PreparedPairs p(c, us, vs);
    for (std::size_t i = 0; i < us.size(); ++i)
      for (std::size_t j = 0; j < vs.size(); ++j) {
        EXPECT_DOUBLE_EQ(p.density(i, j), c.density(us[i], vs[j]));
        EXPECT_DOUBLE_EQ(p.d21(i, j), c.d21(us[i], vs[j]));
        EXPECT_DOUBLE_EQ(p.d12(i, j), c.d12(us[i], vs[j]));
      }
  }
}

TEST(Debye, MatchesExponentialSeries) {
  for (double x : {1e-3, 0.1, 1.0, 1.86, 5.74, 20.9, 50.0})
    EXPECT_NEAR(debye1(x), debye_series(x), 1e-12) << x;
}

TEST(Debye, ReflectionForNegativeArgument) {
  // D1(-x) = D1(x) + x/2
  for (double x : {0.5, 2.1, 10.0}) EXPECT_NEAR(debye1(-x), debye1(x) + x / 2, 1e-12) << x;
}

TEST(Debye, SmallArgumentLimit) {
  EXPECT_NEAR(debye1(0.0), 1.0, 1e-15);
  EXPECT_NEAR(debye1(1e-8), 1.0 - 1e-8 / 4, 1e-15);
}

TEST(KendallTau, ClosedFormsMatchIntegralDefinition) {
  for (auto [fam, th] : {std::pair{Family::FGM, 0.8}, {Family::Frank, -2.1},
                         {Family::Frank, 5.74}, {Family::Clayton, 2.0}}) {
    const Copula c(fam, th);
    EXPECT_NEAR(c.kendall_tau(), tau_by_integral(c), 2e-4) << to_string(fam) << " " << th;
  }
}

TEST(KendallTau, RoundTripAcrossFamilies) {
  for (double tau : {-0.2, -0.05, 0.1, 0.2}) {
    const double th = tau_to_theta(Family::FGM, tau);
    EXPECT_NEAR(Copula(Family::FGM, th).kendall_tau(), tau, 1e-12);
  }
  for (double tau : {-0.9, -0.3, 0.01, 0.38, 0.9}) {
    const double th = tau_to_theta(Family::Frank, tau);
    EXPECT_NEAR(Copula(Family::Frank, th).kendall_tau(), tau, 1e-9) << tau;
  }
  for (double tau : {0.05, 0.5, 0.9}) {
    const double th = tau_to_theta(Family::Clayton, tau);
    EXPECT_NEAR(Copula(Family::Clayton, th).kendall_tau(), tau, 1e-12);
  }
}

TEST(KendallTau, UnattainableTauRaises) {
  EXPECT_THROW(tau_to_theta(Family::FGM, 0.5), DomainError);
  EXPECT_THROW(tau_to_theta(Family::Clayton, -0.1), DomainError);
  EXPECT_THROW(tau_to_theta(Family::Frank, 1.0), DomainError);
  EXPECT_THROW(tau_to_theta(Family::Frank, 0.0), DomainError);
}

TEST(KendallTau, FrankMonotoneInTheta) {
  double prev = -1.0;
  for (double th = -40.0; th <= 40.0; th += 0.37) {
    if (std::abs(th) < 1e-9) continue;
    const double t = Copula(Family::Frank, th).kendall_tau();
    EXPECT_GT(t, prev) << th;
    prev = t;
  }
}

TEST(KendallTau, FgmLinearAndClaytonIncreasing) {
  for (double th : {-1.0, -0.3, 0.0001, 0.45, 1.0})
    EXPECT_NEAR(Copula(Family::FGM, th).kendall_tau(), 2.0 * th / 9.0, 1e-15);
  double prev = 0.0;
  for (double th = 0.01; th <= 50.0; th *= 1.3) {
    const double t = Copula(Family::Clayton, th).kendall_tau();
    EXPECT_GT(t, prev) << th;
    prev = t;
  }
}

TEST(Sampler, MarginsAreUniform) {
  for (auto [fam, th] : {std::pair{Family::FGM, -1.0}, {Family::Frank, 5.74},
                         {Family::Clayton, 2.0}}) {
    const Copula c(fam, th);
    Rng rng(17);
    const int n = 20000;
    std::vector<double> a, b;
    for (int i = 0; i < n; ++i) {
      const auto [x, y] = c.sample_pair(rng);
      ASSERT_TRUE(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0);
      a.push_back(x);
      b.push_back(y);
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double ks_a = 0.0, ks_b = 0.0;
    for (int i = 0; i < n; ++i) {
      ks_a = std::max(ks_a, std::abs(a[i] - (i + 0.5) / n));
      ks_b = std::max(ks_b, std::abs(b[i] - (i + 0.5) / n));
    }
    // 1.63 / sqrt(n) is the 1% Kolmogorov critical value.
    EXPECT_LT(ks_a, 1.63 / std::sqrt(n)) << to_string(fam);
    EXPECT_LT(ks_b, 1.63 / std::sqrt(n)) << to_string(fam);
  }
}

// Invariant: pre-truncation pairs have empirical tau within 0.03 of the
// model tau at 10 000 pairs.
TEST(Sampler, EmpiricalKendallTauMatchesModel) {
  for (const auto& m : model_catalog()) {
    const Copula c(m.family, m.theta);
    Rng rng(99);
    std::vector<double> a, b;
    for (int i = 0; i < 10000; ++i) {
      const auto [x, y] = c.sample_pair(rng);
      a.push_back(x);
      b.push_back(y);
    }
    EXPECT_NEAR(empirical_kendall_tau(a, b), c.kendall_tau(), 0.03) << m.label;
  }
}

TEST(Sampler, DeterministicGivenSeed) {
  const Copula c(Family::Clayton, 3.0);
  Rng r1(5), r2(5);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(c.sample_pair(r1), c.sample_pair(r2));
}

TEST(ThetaDomain, DefaultsPerFamily) {
  const auto fgm = default_theta_domain(Family::FGM);
  ASSERT_EQ(fgm.size(), 1u);
  EXPECT_EQ(fgm[0].lo, -1.0);
  EXPECT_EQ(fgm[0].hi, 1.0);
  const auto frank = default_theta_domain(Family::Frank);
  ASSERT_EQ(frank.size(), 2u);
  EXPECT_EQ(frank[0].lo, -50.0);
  EXPECT_EQ(frank[0].hi, -1e-4);
  EXPECT_EQ(frank[1].lo, 1e-4);
  EXPECT_EQ(frank[1].hi, 50.0);
  const auto clayton = default_theta_domain(Family::Clayton);
  ASSERT_EQ(clayton.size(), 1u);
  EXPECT_EQ(clayton[0].lo, 1e-4);
  EXPECT_EQ(clayton[0].hi, 50.0);
}

TEST(Validate, AllChecksPassOnDefaultGrids) {
  const auto rep = validate_copulas();
  for (const auto& c : rep.checks)
    EXPECT_TRUE(c.passed) << to_string(c.family) << " " << c.theta << " " << c.check
                          << " worst " << c.worst;
  EXPECT_EQ(rep.checks.size(), 3u * 5u * 5u);
}

TEST(Validate, InjectedWrongSignPartialFailsNamedCheck) {
  ValidationOptions o;
  o.families = {Family::Frank};
  o.hook = [](const Copula& c, Partial p, double u, double v) {
    switch (p) {
      case Partial::Density: return c.density(u, v);
      case Partial::D21: return -c.d21(u, v);
      case Partial::D12: return c.d12(u, v);
    }
    return 0.0;
  };
  const auto rep = validate_copulas(o);
  EXPECT_FALSE(rep.all_passed());
  for (const auto& c : rep.checks) {
    if (c.check == "d21_vs_density")
      EXPECT_FALSE(c.passed) << c.theta;
    else
      EXPECT_TRUE(c.passed) << c.check << " " << c.theta;
  }
}

TEST(Validate, EmptyFamilyListIsAnError) {
  ValidationOptions o;
  o.families.clear();
  EXPECT_THROW(validate_copulas(o), ValidationError);
}
