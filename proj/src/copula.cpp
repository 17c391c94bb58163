#include "dtcopula/copula.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include <boost/math/tools/roots.hpp>

#include "dtcopula/error.hpp"

namespace dtcopula {

namespace {

// Uniform on the open interval (0, 1).
double open_uniform(Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double t = unif(rng);
  while (t <= 0.0) t = unif(rng);
  return t;
}

void check_unit(double u, const char* name) {
  if (!(u >= 0.0 && u <= 1.0)) {
    std::ostringstream os;
    os << "copula argument " << name << " = " << u << " outside [0, 1]";
    throw DomainError(os.str());
  }
}

double frank_tau(double theta) {
  return 1.0 - 4.0 / theta * (1.0 - debye1(theta));
}

}  // namespace

std::string_view to_string(Family family) {
  switch (family) {
    case Family::Independence: return "indep";
    case Family::FGM: return "fgm";
    case Family::Frank: return "frank";
    case Family::Clayton: return "clayton";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (s == "indep" || s == "independence") return Family::Independence;
  if (s == "fgm") return Family::FGM;
  if (s == "frank") return Family::Frank;
  if (s == "clayton") return Family::Clayton;
  throw ValidationError("unknown copula family '" + std::string(name) +
                        "' (expected fgm, frank, clayton or indep)");
}

Copula::Copula(Family family, double theta) : family_(family), theta_(theta) {
  std::ostringstream os;
  switch (family) {
    case Family::Independence:
      theta_ = 0.0;
      return;
    case Family::FGM:
      if (!(theta >= -1.0 && theta <= 1.0)) os << "FGM theta must lie in [-1, 1]";
      break;
    case Family::Frank:
      if (!std::isfinite(theta) || theta == 0.0)
        os << "Frank theta must be finite and non-zero";
      break;
    case Family::Clayton:
      if (!(theta > 0.0) || !std::isfinite(theta))
        os << "Clayton theta must lie in (0, inf)";
      break;
  }
  if (!os.str().empty()) {
    os << ", got " << theta;
    throw DomainError(os.str());
  }
}

double Copula::cdf(double u, double v) const {
  check_unit(u, "u");
  check_unit(v, "v");
  if (u == 0.0 || v == 0.0) return 0.0;
  switch (family_) {
    case Family::Independence: return u * v;
    case Family::FGM: return u * v * (1.0 + theta_ * (1.0 - u) * (1.0 - v));
    case Family::Frank: {
      const double eta = -std::expm1(-theta_);
      const auto a = detail::frank_arg(theta_, u);
      const auto b = detail::frank_arg(theta_, v);
      const double x = a.o * b.o / eta;
      if (x < 0.5) return -std::log1p(-x) / theta_;
      return -std::log(detail::frank_denom(a, b) / eta) / theta_;
    }
    case Family::Clayton: {
      if (u == 1.0) return v;
      if (v == 1.0) return u;
      const auto a = detail::clayton_arg(theta_, u);
      const auto b = detail::clayton_arg(theta_, v);
      return std::exp(a.lu + b.lu - detail::clayton_log_t(a, b) / theta_);
    }
  }
  return 0.0;
}

double Copula::density(double u, double v) const {
  u = detail::clamp_unit(u, kEdge);
  v = detail::clamp_unit(v, kEdge);
  switch (family_) {
    case Family::Independence: return 1.0;
    case Family::FGM: return detail::fgm_density(theta_, 1.0 - 2.0 * u, 1.0 - 2.0 * v);
    case Family::Frank:
      return detail::frank_density(theta_, -std::expm1(-theta_),
                                   detail::frank_arg(theta_, u),
                                   detail::frank_arg(theta_, v));
    case Family::Clayton:
      return detail::clayton_density(theta_, detail::clayton_arg(theta_, u),
                                     detail::clayton_arg(theta_, v));
  }
  return 1.0;
}

double Copula::d21(double u, double v) const {
  u = detail::clamp_unit(u, kEdge);
  v = detail::clamp_unit(v, kEdge);
  switch (family_) {
    case Family::Independence: return 0.0;
    case Family::FGM: return detail::fgm_d21(theta_, 1.0 - 2.0 * v);
    case Family::Frank:
      return detail::frank_d21(theta_, -std::expm1(-theta_),
                               detail::frank_arg(theta_, u),
                               detail::frank_arg(theta_, v));
    case Family::Clayton:
      return detail::clayton_d21(theta_, detail::clayton_arg(theta_, u),
                                 detail::clayton_arg(theta_, v));
  }
  return 0.0;
}

double Copula::d12(double u, double v) const {
  u = detail::clamp_unit(u, kEdge);
  v = detail::clamp_unit(v, kEdge);
  switch (family_) {
    case Family::Independence: return 0.0;
    case Family::FGM: return detail::fgm_d12(theta_, 1.0 - 2.0 * u);
    case Family::Frank:
      return detail::frank_d12(theta_, -std::expm1(-theta_),
                               detail::frank_arg(theta_, u),
                               detail::frank_arg(theta_, v));
    case Family::Clayton:
      return detail::clayton_d12(theta_, detail::clayton_arg(theta_, u),
                                 detail::clayton_arg(theta_, v));
  }
  return 0.0;
}

double Copula::kendall_tau() const {
  switch (family_) {
    case Family::Independence: return 0.0;
    case Family::FGM: return 2.0 * theta_ / 9.0;
    case Family::Frank: return frank_tau(theta_);
    case Family::Clayton: return theta_ / (theta_ + 2.0);
  }
  return 0.0;
}

std::pair<double, double> Copula::sample_pair(Rng& rng) const {
  switch (family_) {
    case Family::Independence: {
      const double x = open_uniform(rng);
      return {x, open_uniform(rng)};
    }
    case Family::FGM: {
      // Conditional inversion of P(V <= v | U = x) = v (a - (a - 1) v):
      // the root in [0, 1] of (a-1) v^2 - a v + t = 0 is 2t / (a + b).
      const double x = open_uniform(rng);
      const double t = open_uniform(rng);
      const double a = 1.0 + theta_ * (1.0 - 2.0 * x);
      const double b = std::sqrt(a * a - 4.0 * (a - 1.0) * t);
      return {x, 2.0 * t / (b + a)};
    }
    case Family::Frank: {
      const double t = open_uniform(rng);
      const double u = open_uniform(rng);
      const double x =
          -std::log1p(t * std::expm1(-theta_) /
                      (t + (1.0 - t) * std::exp(-theta_ * u))) /
          theta_;
      return {std::clamp(x, 0.0, 1.0), u};
    }
    case Family::Clayton: {
      std::exponential_distribution<double> expo(1.0);
      std::gamma_distribution<double> gamma(1.0 / theta_, 1.0);
      const double y1 = expo(rng);
      const double y2 = expo(rng);
      double z = gamma(rng);
      while (z <= 0.0) z = gamma(rng);
      // Laplace transform of Gamma(1/theta, 1) evaluated at y / z.
      const double u = std::exp(-std::log1p(y2 / z) / theta_);
      const double x = std::exp(-std::log1p(y1 / z) / theta_);
      return {x, u};
    }
  }
  return {0.5, 0.5};
}

std::vector<ThetaInterval> default_theta_domain(Family family) {
  switch (family) {
    case Family::Independence: return {{0.0, 0.0}};
    case Family::FGM: return {{-1.0, 1.0}};
    case Family::Frank: return {{-50.0, -1e-4}, {1e-4, 50.0}};
    case Family::Clayton: return {{1e-4, 50.0}};
  }
  return {};
}

double tau_to_theta(Family family, double tau) {
  std::ostringstream os;
  switch (family) {
    case Family::Independence:
      if (tau == 0.0) return 0.0;
      os << "independence copula only attains tau = 0";
      break;
    case Family::FGM:
      if (tau >= -2.0 / 9.0 && tau <= 2.0 / 9.0) return std::clamp(4.5 * tau, -1.0, 1.0);
      os << "FGM attains tau in [-2/9, 2/9]";
      break;
    case Family::Clayton:
      if (tau > 0.0 && tau < 1.0) return 2.0 * tau / (1.0 - tau);
      os << "Clayton attains tau in (0, 1)";
      break;
    case Family::Frank: {
      if (!(tau > -1.0 && tau < 1.0) || tau == 0.0) {
        os << "Frank attains tau in (-1, 1) excluding 0";
        break;
      }
      // tau(theta) is odd and increasing; bracket on the positive side.
      const double target = std::abs(tau);
      auto g = [&](double th) { return frank_tau(th) - target; };
      double hi = 1.0;
      while (g(hi) < 0.0) hi *= 2.0;
      const double lo = hi == 1.0 ? 1e-8 : hi / 2.0;
      boost::uintmax_t iters = 200;
      auto r = boost::math::tools::toms748_solve(
          g, lo, hi, boost::math::tools::eps_tolerance<double>(50), iters);
      const double th = 0.5 * (r.first + r.second);
      return tau < 0.0 ? -th : th;
    }
  }
  os << ", got " << tau;
  throw DomainError(os.str());
}

PreparedPairs::PreparedPairs(const Copula& copula, std::span<const double> u,
                             std::span<const double> v)
    : family_(copula.family()),
      theta_(copula.theta()),
      nu_(u.size()),
      nv_(v.size()) {
  auto fill = [&](std::span<const double> src, std::vector<double>& a,
                  std::vector<detail::FrankArg>& f,
                  std::vector<detail::ClaytonArg>& c) {
    switch (family_) {
      case Family::Independence: break;
      case Family::FGM:
        a.resize(src.size());
        for (std::size_t i = 0; i < src.size(); ++i)
          a[i] = 1.0 - 2.0 * detail::clamp_unit(src[i], kEdge);
        break;
      case Family::Frank:
        f.resize(src.size());
        for (std::size_t i = 0; i < src.size(); ++i)
          f[i] = detail::frank_arg(theta_, detail::clamp_unit(src[i], kEdge));
        break;
      case Family::Clayton:
        c.resize(src.size());
        for (std::size_t i = 0; i < src.size(); ++i)
          c[i] = detail::clayton_arg(theta_, detail::clamp_unit(src[i], kEdge));
        break;
    }
  };
  if (family_ == Family::Frank) eta_ = -std::expm1(-theta_);
  fill(u, ua_, fu_, uc_);
  fill(v, va_, fv_, vc_);
}

}  // namespace dtcopula
