#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "dtcopula/error.hpp"
#include "dtcopula/sample.hpp"
#include "dtcopula/step_function.hpp"

using namespace dtcopula;

namespace {

ObservedSample random_sample(std::size_t n, double phi, std::uint64_t seed, bool ties = false) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> u, x;
  for (std::size_t i = 0; i < n; ++i) {
    double uu = unif(rng);
    double xx = uu + phi * unif(rng);
    if (ties) {
      uu = std::round(uu * 8) / 8;
      xx = std::clamp(std::round(xx * 8) / 8, uu, uu + phi);
    }
    u.push_back(uu);
    x.push_back(xx);
  }
  return ObservedSample(u, x, phi);
}

}  // namespace

TEST(ObservedSample, RejectsNonObservableRowsAndNamesThem) {
  try {
    ObservedSample({0.0, 1.0, 0.0}, {0.5, 0.5, 2.0}, 1.0);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.rows(), (std::vector<std::size_t>{1, 2}));
  }
}

TEST(ObservedSample, RejectsBadInput) {
  EXPECT_THROW(ObservedSample({}, {}, 1.0), ValidationError);
  EXPECT_THROW(ObservedSample({0.0}, {0.5}, 0.0), ValidationError);
  EXPECT_THROW(ObservedSample({0.0}, {0.5}, -1.0), ValidationError);
  EXPECT_THROW(ObservedSample({0.0, 0.1}, {0.5}, 1.0), ValidationError);
  EXPECT_THROW(ObservedSample({std::nan("")}, {0.5}, 1.0), ValidationError);
  EXPECT_THROW(ObservedSample({0.0}, {std::numeric_limits<double>::infinity()}, 1.0),
               ValidationError);
}

TEST(ObservedSample, BoundaryRecordsAreObservable) {
  const ObservedSample s({0.0, 0.0}, {0.0, 1.0}, 1.0);
  EXPECT_EQ(s.size(), 2u);
  EXPECT_DOUBLE_EQ(s.v(1), 1.0);
}

TEST(ObservedSample, LoadFromRecords) {
  const std::vector<Record> rows{{0.1, 0.2}, {0.3, 0.9}};
  const ObservedSample s = load_sample(rows, 1.0);
  EXPECT_DOUBLE_EQ(s.u(1), 0.3);
  EXPECT_DOUBLE_EQ(s.x(0), 0.2);
}

TEST(TruncationMatrix, EntriesFollowObservability) {
  const ObservedSample s = random_sample(30, 0.6, 3);
  const TruncationMatrix j(s);
  for (std::size_t m = 0; m < s.size(); ++m) {
    std::size_t rc = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const bool in = s.u(m) <= s.x(i) && s.x(i) <= s.u(m) + s.phi();
      EXPECT_EQ(j(m, i), in);
      rc += in;
    }
    EXPECT_EQ(j.row_count(m), rc);
    // Every record lies in its own window.
    EXPECT_TRUE(j(m, m));
  }
}

TEST(TruncationMatrix, WideWindowGivesAllOnes) {
  std::vector<double> u, x;
  for (int i = 0; i < 12; ++i) {
    u.push_back(i / 12.0);
    x.push_back(1.0 + i / 12.0);
  }
  const ObservedSample s(u, x, 10.0);
  const TruncationMatrix j(s);
  for (std::size_t m = 0; m < s.size(); ++m) EXPECT_EQ(j.row_count(m), s.size());
}

// Invariant: the window layout describes J exactly, ties included.
TEST(WindowLayout, ContiguousRangesReproduceMatrix) {
  for (bool ties : {false, true}) {
    const ObservedSample s = random_sample(60, 0.4, 11, ties);
    const TruncationMatrix j(s);
    const WindowLayout l(s);
    for (std::size_t q = 0; q < l.n; ++q) {
      const std::size_t m = l.by_u[q];
      for (std::size_t p = 0; p < l.n; ++p) {
        const bool in_range = p >= l.life_lo[q] && p < l.life_hi[q];
        EXPECT_EQ(in_range, j(m, l.by_x[p])) << "ties=" << ties;
        const bool in_win = q >= l.win_lo[p] && q < l.win_hi[p];
        EXPECT_EQ(in_win, j(m, l.by_x[p]));
      }
    }
    for (std::size_t i = 0; i < l.n; ++i) {
      EXPECT_EQ(l.by_x[l.x_pos[i]], i);
      EXPECT_EQ(l.by_u[l.u_pos[i]], i);
    }
    for (std::size_t p = 0; p < l.n; ++p) {
      const double xp = s.x(l.by_x[p]);
      EXPECT_EQ(s.x(l.by_x[l.x_tie_first[p]]), xp);
      EXPECT_EQ(s.x(l.by_x[l.x_tie_last[p]]), xp);
      if (l.x_tie_first[p] > 0) EXPECT_LT(s.x(l.by_x[l.x_tie_first[p] - 1]), xp);
      if (l.x_tie_last[p] + 1 < l.n) EXPECT_GT(s.x(l.by_x[l.x_tie_last[p] + 1]), xp);
    }
  }
}

TEST(ObservedSample, PermutedReordersRecords) {
  const ObservedSample s = random_sample(5, 1.0, 8);
  const std::vector<std::size_t> perm{4, 2, 0, 1, 3};
  const ObservedSample p = s.permuted(perm);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(p.u(i), s.u(perm[i]));
    EXPECT_EQ(p.x(i), s.x(perm[i]));
  }
}

TEST(StepFunction, RightContinuousWithLimits) {
  const std::vector<double> pts{1, 2, 3, 4};
  const std::vector<double> w(4, 0.25);
  const StepFunction f(pts, w);
  EXPECT_DOUBLE_EQ(f(2.5), 0.5);
  EXPECT_DOUBLE_EQ(f(2.0), 0.5);
  EXPECT_DOUBLE_EQ(f(1.9999), 0.25);
  EXPECT_DOUBLE_EQ(f(-std::numeric_limits<double>::infinity()), 0.0);
  EXPECT_DOUBLE_EQ(f(std::numeric_limits<double>::infinity()), 1.0);
}

TEST(StepFunction, SingleAtomJumpsToOne) {
  const StepFunction f(std::vector<double>{0.7}, std::vector<double>{1.0});
  EXPECT_DOUBLE_EQ(f(0.69), 0.0);
  EXPECT_DOUBLE_EQ(f(0.7), 1.0);
  EXPECT_DOUBLE_EQ(f.quantile(0.3), 0.7);
}

TEST(StepFunction, TiesAreMergedAndOrderIsIrrelevant) {
  const StepFunction f(std::vector<double>{3, 1, 3, 2}, std::vector<double>{0.1, 0.2, 0.3, 0.4});
  ASSERT_EQ(f.support().size(), 3u);
  EXPECT_DOUBLE_EQ(f(1.0), 0.2);
  EXPECT_DOUBLE_EQ(f(2.0), 0.6);
  EXPECT_NEAR(f(3.0), 1.0, 1e-15);
}

TEST(StepFunction, QuantileIsGeneralizedInverse) {
  const StepFunction f(std::vector<double>{1, 2, 3, 4}, std::vector<double>(4, 0.25));
  EXPECT_DOUBLE_EQ(f.quantile(0.0), 1.0);
  EXPECT_DOUBLE_EQ(f.quantile(0.25), 1.0);
  EXPECT_DOUBLE_EQ(f.quantile(0.2500001), 2.0);
  EXPECT_DOUBLE_EQ(f.quantile(0.5), 2.0);
  EXPECT_DOUBLE_EQ(f.quantile(1.0), 4.0);
  EXPECT_DOUBLE_EQ(f.quantile(1.5), 4.0);
  // Smallest t with F(t) >= p, checked against a scan.
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> pts(40), w(40);
  for (auto& v : pts) v = unif(rng);
  for (auto& v : w) v = unif(rng);
  const double tot = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto& v : w) v /= tot;
  const StepFunction g(pts, w);
  for (int t = 0; t < 200; ++t) {
    const double p = unif(rng);
    const double q = g.quantile(p);
    EXPECT_GE(g(q), p - 1e-12);
    for (double s : g.support())
      if (s < q) EXPECT_LT(g(s), p);
  }
}
