#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dtcopula {

/// One observed record: left-truncation time u and lifetime x. The right
/// truncation time is u + phi and is never stored.
struct Record {
  double u;
  double x;
};

/// True when x is observable under the window [u, u + phi]. Every
/// comparison in the library goes through this predicate.
inline bool observable(double u, double x, double phi) {
  return u <= x && x <= u + phi;
}

/// Doubly truncated sample under interval sampling (V = U + phi).
class ObservedSample {
 public:
  /// Throws ValidationError on empty input, non-finite values, phi <= 0,
  /// size mismatch, or any record violating u <= x <= u + phi (the error
  /// lists the offending row indices).
  ObservedSample(std::vector<double> u, std::vector<double> x, double phi);

  std::size_t size() const noexcept { return x_.size(); }
  double phi() const noexcept { return phi_; }
  double u(std::size_t i) const { return u_[i]; }
  double x(std::size_t i) const { return x_[i]; }
  double v(std::size_t i) const { return u_[i] + phi_; }

  std::span<const double> truncation_times() const noexcept { return u_; }
  std::span<const double> lifetimes() const noexcept { return x_; }

  /// Same records reordered: record i of the result is record perm[i] here.
  ObservedSample permuted(std::span<const std::size_t> perm) const;

 private:
  std::vector<double> u_;
  std::vector<double> x_;
  double phi_;
};

/// Validating constructor from (u, x) rows.
ObservedSample load_sample(std::span<const Record> rows, double phi);

/// J(i, j) = 1 iff U_i <= X_j <= U_i + phi: row index is a truncation
/// window, column index a lifetime.
class TruncationMatrix {
 public:
  explicit TruncationMatrix(const ObservedSample& sample);

  std::size_t size() const noexcept { return n_; }
  bool operator()(std::size_t i, std::size_t j) const {
    return cells_[i * n_ + j] != 0;
  }
  std::size_t row_count(std::size_t i) const;
  std::size_t col_count(std::size_t j) const;

 private:
  std::size_t n_;
  std::vector<std::uint8_t> cells_;
};

TruncationMatrix truncation_matrix(const ObservedSample& sample);

/// Sorted-order view of J used by the windowed kernels. Lifetimes sorted by
/// x occupy positions p, truncation windows sorted by u occupy positions q.
/// Window q sees the contiguous lifetime positions [life_lo[q], life_hi[q]),
/// and lifetime p lies in the contiguous windows [win_lo[p], win_hi[p]).
struct WindowLayout {
  explicit WindowLayout(const ObservedSample& sample);

  std::size_t n;
  std::vector<std::size_t> by_x;    // record at lifetime position p
  std::vector<std::size_t> by_u;    // record at window position q
  std::vector<std::size_t> x_pos;   // lifetime position of record i
  std::vector<std::size_t> u_pos;   // window position of record i
  std::vector<std::size_t> life_lo, life_hi;
  std::vector<std::size_t> win_lo, win_hi;
  // First sorted position sharing the value (tie group start).
  std::vector<std::size_t> x_tie_first, u_tie_first;
  // Last sorted position sharing the value (tie group end, inclusive).
  std::vector<std::size_t> x_tie_last, u_tie_last;
};

}  // namespace dtcopula
