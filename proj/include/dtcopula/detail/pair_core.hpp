#pragma once

// Closed-form copula density and third-order mixed partials expressed in
// per-argument transforms. Shared by the scalar Copula methods and the batch
// evaluators used by the weighted-sum kernels.

#include <algorithm>
#include <cmath>

namespace dtcopula::detail {

inline double clamp_unit(double u, double edge) {
  return std::clamp(u, edge, 1.0 - edge);
}

// FGM, g = 1 - 2u.
inline double fgm_density(double theta, double gu, double gv) {
  return 1.0 + theta * gu * gv;
}
inline double fgm_d21(double theta, double gv) { return -2.0 * theta * gv; }
inline double fgm_d12(double theta, double gu) { return -2.0 * theta * gu; }

// Frank. Per argument: a = exp(-theta u), o = 1 - a, r = 1 - exp(-theta (1-u)).
//   c = theta eta a_u a_v / D^2,  eta = 1 - exp(-theta)
//   D = eta - o_u o_v = a_u o_v + a_v r_v
//   dc/du = c theta (2 a_u o_v / D - 1)
// The second form of D has no cancellation near the upper-right corner,
// where eta - o_u o_v loses every digit for large theta.
struct FrankArg {
  double a;
  double o;
  double r;
};

inline FrankArg frank_arg(double theta, double u) {
  return {std::exp(-theta * u), -std::expm1(-theta * u), -std::expm1(-theta * (1.0 - u))};
}

inline double frank_denom(const FrankArg& u, const FrankArg& v) {
  return u.a * v.o + v.a * v.r;
}

inline double frank_density(double theta, double eta, const FrankArg& u,
                            const FrankArg& v) {
  const double d = frank_denom(u, v);
  return theta * eta * u.a * v.a / (d * d);
}
inline double frank_d21(double theta, double eta, const FrankArg& u,
                        const FrankArg& v) {
  const double d = frank_denom(u, v);
  const double c = theta * eta * u.a * v.a / (d * d);
  return c * theta * (2.0 * u.a * v.o / d - 1.0);
}
inline double frank_d12(double theta, double eta, const FrankArg& u,
                        const FrankArg& v) {
  const double d = frank_denom(u, v);
  const double c = theta * eta * u.a * v.a / (d * d);
  return c * theta * (2.0 * v.a * u.o / d - 1.0);
}

// Clayton in terms of q = u^theta:
//   c = (1 + theta) q_u q_v T^(-2 - 1/theta),  T = q_u + q_v - q_u q_v.
// Per argument: l = theta log u, m = 1 - q = -expm1(l), lm = log m, lu = log u.
// T is formed in log space so that q underflow for large theta is harmless.
struct ClaytonArg {
  double l;
  double m;
  double lm;
  double lu;
};

inline ClaytonArg clayton_arg(double theta, double u) {
  const double lu = std::log(u);
  const double l = theta * lu;
  const double m = -std::expm1(l);
  return {l, m, std::log(m), lu};
}

inline double clayton_log_t(const ClaytonArg& a, const ClaytonArg& b) {
  // T = q_a (1 + (q_b/q_a) m_a) with q_a >= q_b
  if (a.l >= b.l) return a.l + std::log1p(std::exp(b.l - a.l) * a.m);
  return b.l + std::log1p(std::exp(a.l - b.l) * b.m);
}

inline double clayton_density(double theta, const ClaytonArg& u,
                              const ClaytonArg& v) {
  const double lt = clayton_log_t(u, v);
  return (1.0 + theta) * std::exp(u.l + v.l - (2.0 + 1.0 / theta) * lt);
}

// dc/du = c (theta/u) (1 - (2 + 1/theta) q_u (1-q_v) / T)
inline double clayton_d21(double theta, const ClaytonArg& u,
                          const ClaytonArg& v) {
  const double lt = clayton_log_t(u, v);
  const double c = (1.0 + theta) * std::exp(u.l + v.l - (2.0 + 1.0 / theta) * lt);
  const double r = std::exp(u.l + v.lm - lt);
  return c * theta * std::exp(-u.lu) * (1.0 - (2.0 + 1.0 / theta) * r);
}

inline double clayton_d12(double theta, const ClaytonArg& u,
                          const ClaytonArg& v) {
  return clayton_d21(theta, v, u);
}

}  // namespace dtcopula::detail
