#pragma once

// Free-particle Wigner functions built from a momentum-space wave function.
// Momenta in mc, positions in hbar/mc (Compton wavelengths).

#include <span>
#include <string>
#include <vector>

#include "relwig/grid.hpp"

namespace relwig {

/// Unit: nonlocal-theory Wigner transform. Epsilon: kernel epsilon(p + P/2, p - P/2).
enum class WignerKernel { Unit, Epsilon };

const char* to_string(WignerKernel kernel);
WignerKernel parse_wigner_kernel(const std::string& name);

/// psi(p) = (pi w^2)^(-1/4) exp(-(p - p0)^2 / (2 w^2) - i p q0), sampled at the
/// grid's p nodes. Square-normalised on the real line.
std::vector<cplx> gaussian_momentum_state(const PhaseGrid& grid, double width, double p0 = 0.0,
                                          double q0 = 0.0);

/// W(p,q) = (1/2pi) Int K(p+P/2, p-P/2) psi*(p+P/2) psi(p-P/2) exp(-iPq) dP.
///
/// psi holds one sample per grid p node. The integral runs over P = 2k dp so
/// both arguments stay on grid nodes. Throws std::invalid_argument when psi
/// is not negligible (1e-4 of its peak) at the ends of the p range, or when
/// the q range exceeds the pi/dp period of the quadrature.
ComplexField free_wigner_pair(std::span<const cplx> psi, const PhaseGrid& grid,
                              WignerKernel kernel);

}  // namespace relwig
