#include "mhdlab/tridiag.hpp"

#include <cmath>

#include "mhdlab/errors.hpp"

namespace mhdlab {

std::vector<double> Tridiagonal::solve() const {
  const std::size_t n = size();
  std::vector<double> c(n), x(n);
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    scale = std::fmax(scale, std::abs(lo[i]) + std::abs(di[i]) + std::abs(up[i]));
  double pivot = di[0];
  if (!(std::abs(pivot) > 1e-300 && std::abs(pivot) > 1e-14 * scale))
    throw NumericalFailure("singular tridiagonal system", 0);
  c[0] = up[0] / pivot;
  x[0] = rhs[0] / pivot;
  for (std::size_t i = 1; i < n; ++i) {
    pivot = di[i] - lo[i] * c[i - 1];
    if (!(std::abs(pivot) > 1e-14 * scale))
      throw NumericalFailure("singular tridiagonal system", static_cast<std::ptrdiff_t>(i));
    c[i] = up[i] / pivot;
    x[i] = (rhs[i] - lo[i] * x[i - 1]) / pivot;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
  return x;
}

}  // namespace mhdlab
