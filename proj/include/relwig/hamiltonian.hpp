#pragma once

// Weyl symbol E(p,q) of the rotator Hamiltonian sqrt(1 + 2 lambda^2 H_osc),
// in mc^2 units, from the alternating spectral sum
//   E = 2 e^{-r^2} sum_n (-1)^n E(n) L_n(2 r^2),
// plus its small-lambda polynomial expansion.

#include <cstddef>

#include "relwig/accel.hpp"
#include "relwig/grid.hpp"
#include "relwig/star.hpp"

namespace relwig {

struct HamiltonianReport {
  bool converged = true;
  std::size_t unique_radii = 0;
  std::size_t failures = 0;        // radii whose Cauchy test never passed
  std::size_t max_terms_used = 0;
  double worst_delta = 0.0;        // largest final |T_k - T_{k-1}|
  double worst_p = 0.0, worst_q = 0.0;
};

struct HamiltonianSymbol {
  SymbolField symbol;
  HamiltonianReport report;
};

struct HamiltonianOptions {
  std::size_t max_terms = 2048;  // spectral truncation N
  Acceleration accel = Acceleration::Euler;
  double tolerance = 1e-10;
  unsigned cesaro_order = 2;
  /// Beyond `taper_outer` (> 0) the symbol is replaced by its value at that
  /// radius, blended smoothly from `taper_inner`; see taper_far_field.
  double taper_inner = 0.0, taper_outer = 0.0;

  SeriesControl control() const;
};

/// Radial value at r^2 = p^2 + q^2.
SeriesEstimate rotator_hamiltonian_value(double lambda, double r2,
                                         const HamiltonianOptions& opts = {});

/// Symbol sampled on a rotator-units grid; each distinct radius is summed once.
/// Non-convergence is reported, not thrown.
HamiltonianSymbol rotator_hamiltonian_symbol(double lambda, const PhaseGrid& grid,
                                             const HamiltonianOptions& opts = {});

/// 1 + lambda^2 { lambda^2/8 + (r^2/2)(1 - 5 lambda^4/8) - (lambda^2/8) r^4 + (lambda^4/16) r^6 },
/// keeping the r^{2k} terms with k <= order.
double expansion_hamiltonian_value(double lambda, double r2, unsigned order);
SymbolField expansion_hamiltonian(double lambda, const PhaseGrid& grid, unsigned order);

/// C-infinity step s(t) = f(1-t) / (f(1-t) + f(t)), f(x) = exp(-1/x): 1 for t <= 0, 0 for t >= 1.
double smooth_step(double t);

/// w f + (1 - w) far with w = smooth_step((r - inner) / (outer - inner)).
/// Makes non-decaying symbols usable with the periodic IntegralFFT backend.
ComplexField taper_far_field(const ComplexField& f, double inner, double outer, cplx far);

}  // namespace relwig
