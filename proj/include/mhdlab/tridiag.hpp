#pragma once

#include <span>
#include <vector>

namespace mhdlab {

/// Tridiagonal system lo[i] x[i-1] + di[i] x[i] + up[i] x[i+1] = rhs[i].
struct Tridiagonal {
  std::vector<double> lo, di, up, rhs;

  explicit Tridiagonal(std::size_t n = 0) : lo(n, 0.0), di(n, 0.0), up(n, 0.0), rhs(n, 0.0) {}
  std::size_t size() const noexcept { return di.size(); }

  /// Thomas algorithm. Throws NumericalFailure on a vanishing pivot.
  std::vector<double> solve() const;
};

}  // namespace mhdlab
