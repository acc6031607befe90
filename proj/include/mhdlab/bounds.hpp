#pragma once

#include "mhdlab/params.hpp"

namespace mhdlab {

/// Inputs of the closed-form lifespan bounds. R_ref is the fixed radius for
/// the wall-bounded problems and the growth constant C for the free one.
struct BoundInputs {
  double mu = 1.0;
  double lam = 0.0;
  double R_ref = 1.0;
  double C0 = 0.0;
  double E0 = 0.0;
  double alpha = 1.5;
  Geometry geometry = Geometry::Disk2D;

  double nu() const noexcept { return 2.0 * mu + lam; }
};

/// Admissible exponents: (1, 2), and [7/6, 2) for the cylinder.
bool alpha_admissible(double alpha, Geometry g) noexcept;

/// C0^2 (2 - alpha)^2 / (2 nu R_now g(alpha)).
double div_lower_bound(const BoundInputs& b, double R_now);

/// Upper bound on the lifespan; +infinity when C0 = 0 or the exponential overflows.
double lifespan_bound(const BoundInputs& b);

struct AlphaOptimum {
  double alpha = 0.0;
  double T = 0.0;
};

/// Grid search over admissible alpha with step 1e-4; ties keep the smaller alpha.
AlphaOptimum optimize_alpha(const BoundInputs& b, double step = 1e-4);

/// Growth constant a0 + sqrt(E0 / nu) of the free surface.
double envelope_constant(double a0, double E0, double nu);

}  // namespace mhdlab
