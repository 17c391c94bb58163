#pragma once

// Test fixtures built from a fixed RNG stream.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "oracle.hpp"

namespace fixtures {

inline oracle::Data random_data(std::size_t n, double phi, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  oracle::Data d{{}, {}, phi};
  for (std::size_t i = 0; i < n; ++i) {
    const double u = unif(rng);
    d.u.push_back(u);
    d.x.push_back(u + phi * unif(rng));
  }
  return d;
}

// Every window [u, u + phi] covers every lifetime.
inline oracle::Data all_ones_data(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  oracle::Data d{{}, {}, 10.0};
  for (std::size_t i = 0; i < n; ++i) {
    d.u.push_back(unif(rng));
    d.x.push_back(1.0 + unif(rng));
  }
  return d;
}

// The bipartite graph of windows and lifetimes linked by J is connected.
inline bool connected(const oracle::Data& d) {
  const std::size_t n = d.n();
  std::vector<bool> win(n, false), life(n, false);
  std::vector<std::size_t> stack{0};
  win[0] = true;
  while (!stack.empty()) {
    const std::size_t m = stack.back();
    stack.pop_back();
    for (std::size_t j = 0; j < n; ++j) {
      if (!d.in(m, j) || life[j]) continue;
      life[j] = true;
      for (std::size_t q = 0; q < n; ++q)
        if (!win[q] && d.in(q, j)) {
          win[q] = true;
          stack.push_back(q);
        }
    }
  }
  return std::all_of(win.begin(), win.end(), [](bool b) { return b; }) &&
         std::all_of(life.begin(), life.end(), [](bool b) { return b; });
}

struct Case {
  oracle::Fam fam;
  double theta;
};

struct Screened {
  oracle::Data data;
  std::vector<oracle::BruteForce> optima;  // one per case
};

// Small samples whose likelihood has a converged interior maximizer
// (every mass >= min_mass) for each of the given fixed-theta cases.
inline std::vector<Screened> interior_fixtures(const std::vector<Case>& cases, std::size_t count,
                                               std::uint64_t seed, double min_mass = 0.02) {
  std::mt19937_64 rng(seed);
  std::vector<Screened> out;
  while (out.size() < count) {
    const std::size_t n = 2 + rng() % 3;
    const oracle::Data d = random_data(n, 1.0, rng());
    if (!connected(d)) continue;
    Screened s{d, {}};
    bool ok = true;
    for (const Case& c : cases) {
      auto bf = oracle::brute_force(d, c.fam, c.theta);
      const double lo = std::min(*std::min_element(bf.f.begin(), bf.f.end()),
                                 *std::min_element(bf.k.begin(), bf.k.end()));
      if (!bf.converged || lo < min_mass) {
        ok = false;
        break;
      }
      s.optima.push_back(std::move(bf));
    }
    if (ok) out.push_back(std::move(s));
  }
  return out;
}

}  // namespace fixtures
