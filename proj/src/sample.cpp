#include "dtcopula/sample.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <utility>

#include "dtcopula/error.hpp"

namespace dtcopula {

ObservedSample::ObservedSample(std::vector<double> u, std::vector<double> x,
                               double phi)
    : u_(std::move(u)), x_(std::move(x)), phi_(phi) {
  if (!(phi_ > 0.0) || !std::isfinite(phi_))
    throw ValidationError("window length phi must be positive and finite");
  if (u_.size() != x_.size())
    throw ValidationError("truncation and lifetime vectors differ in length");
  if (u_.empty()) throw ValidationError("sample is empty");

  std::vector<std::size_t> nonfinite, violating;
  for (std::size_t i = 0; i < u_.size(); ++i) {
    if (!std::isfinite(u_[i]) || !std::isfinite(x_[i]))
      nonfinite.push_back(i);
    else if (!observable(u_[i], x_[i], phi_))
      violating.push_back(i);
  }
  auto list = [](const std::vector<std::size_t>& rows) {
    std::ostringstream os;
    for (std::size_t k = 0; k < rows.size() && k < 10; ++k)
      os << (k ? ", " : "") << rows[k];
    if (rows.size() > 10) os << ", ... (" << rows.size() << " total)";
    return os.str();
  };
  if (!nonfinite.empty())
    throw ValidationError("non-finite values at rows " + list(nonfinite),
                          nonfinite);
  if (!violating.empty())
    throw ValidationError(
        "records violate u <= x <= u + phi at rows " + list(violating),
        violating);
}

ObservedSample ObservedSample::permuted(
    std::span<const std::size_t> perm) const {
  std::vector<double> u(perm.size()), x(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    u[i] = u_.at(perm[i]);
    x[i] = x_.at(perm[i]);
  }
  return ObservedSample(std::move(u), std::move(x), phi_);
}

ObservedSample load_sample(std::span<const Record> rows, double phi) {
  std::vector<double> u, x;
  u.reserve(rows.size());
  x.reserve(rows.size());
  for (const auto& r : rows) {
    u.push_back(r.u);
    x.push_back(r.x);
  }
  return ObservedSample(std::move(u), std::move(x), phi);
}

TruncationMatrix::TruncationMatrix(const ObservedSample& sample)
    : n_(sample.size()), cells_(n_ * n_) {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      cells_[i * n_ + j] = observable(sample.u(i), sample.x(j), sample.phi());
}

std::size_t TruncationMatrix::row_count(std::size_t i) const {
  return static_cast<std::size_t>(
      std::count(cells_.begin() + i * n_, cells_.begin() + (i + 1) * n_, 1));
}

std::size_t TruncationMatrix::col_count(std::size_t j) const {
  std::size_t c = 0;
  for (std::size_t i = 0; i < n_; ++i) c += cells_[i * n_ + j];
  return c;
}

TruncationMatrix truncation_matrix(const ObservedSample& sample) {
  return TruncationMatrix(sample);
}

namespace {

void tie_groups(std::span<const double> sorted, std::vector<std::size_t>& first,
                std::vector<std::size_t>& last) {
  const std::size_t n = sorted.size();
  first.assign(n, 0);
  last.assign(n, 0);
  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start;
    while (end + 1 < n && sorted[end + 1] == sorted[start]) ++end;
    for (std::size_t p = start; p <= end; ++p) {
      first[p] = start;
      last[p] = end;
    }
    start = end + 1;
  }
}

}  // namespace

WindowLayout::WindowLayout(const ObservedSample& sample) : n(sample.size()) {
  const double phi = sample.phi();
  by_x.resize(n);
  by_u.resize(n);
  std::iota(by_x.begin(), by_x.end(), std::size_t{0});
  std::iota(by_u.begin(), by_u.end(), std::size_t{0});
  // Ties break on the other coordinate, so the order depends on the record
  // values only (up to exact duplicates).
  std::stable_sort(by_x.begin(), by_x.end(), [&](std::size_t a, std::size_t b) {
    return std::pair(sample.x(a), sample.u(a)) < std::pair(sample.x(b), sample.u(b));
  });
  std::stable_sort(by_u.begin(), by_u.end(), [&](std::size_t a, std::size_t b) {
    return std::pair(sample.u(a), sample.x(a)) < std::pair(sample.u(b), sample.x(b));
  });
  x_pos.resize(n);
  u_pos.resize(n);
  std::vector<double> xs(n), us(n);
  for (std::size_t p = 0; p < n; ++p) {
    x_pos[by_x[p]] = p;
    xs[p] = sample.x(by_x[p]);
  }
  for (std::size_t q = 0; q < n; ++q) {
    u_pos[by_u[q]] = q;
    us[q] = sample.u(by_u[q]);
  }

  life_lo.resize(n);
  life_hi.resize(n);
  for (std::size_t q = 0; q < n; ++q) {
    const double u = us[q];
    const auto lo = std::partition_point(xs.begin(), xs.end(),
                                         [&](double x) { return !(u <= x); });
    const auto hi = std::partition_point(
        lo, xs.end(), [&](double x) { return x <= u + phi; });
    life_lo[q] = static_cast<std::size_t>(lo - xs.begin());
    life_hi[q] = static_cast<std::size_t>(hi - xs.begin());
  }

  win_lo.resize(n);
  win_hi.resize(n);
  for (std::size_t p = 0; p < n; ++p) {
    const double x = xs[p];
    const auto lo = std::partition_point(
        us.begin(), us.end(), [&](double u) { return !(x <= u + phi); });
    const auto hi =
        std::partition_point(lo, us.end(), [&](double u) { return u <= x; });
    win_lo[p] = static_cast<std::size_t>(lo - us.begin());
    win_hi[p] = static_cast<std::size_t>(hi - us.begin());
  }

  tie_groups(xs, x_tie_first, x_tie_last);
  tie_groups(us, u_tie_first, u_tie_last);
}

}  // namespace dtcopula
