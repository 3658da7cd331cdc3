#pragma once

// Generalised (off-diagonal) oscillator Wigner functions W_nm(p,q) in
// dimensionless rotator units. W_nm is the Weyl symbol of |n><m| / 2pi, so
//   Int W_nm dp dq = delta_nm  and  Int A W_nm dp dq = <m|A|n>.

#include <cstddef>

#include <Eigen/Dense>

#include "relwig/grid.hpp"

namespace relwig {

/// W_nm at one phase-space point.
cplx wigner_basis_value(std::size_t n, std::size_t m, double p, double q);

struct BasisMatrixElement {
  std::size_t n = 0, m = 0;
  ComplexField field;
};

BasisMatrixElement wigner_basis_element(std::size_t n, std::size_t m, const PhaseGrid& grid);

/// W_nn = (1/pi) e^{-r^2} (-1)^n L_n(2 r^2); real.
ComplexField diagonal_wigner(std::size_t n, const PhaseGrid& grid);

/// sum_{n,m} coeffs(n,m) W_nm on the grid (square coefficient matrix).
ComplexField synthesize(const PhaseGrid& grid, const Eigen::MatrixXcd& coeffs);

/// a(n,m) = Int A conj(W_nm) dp dq for n,m < size. Reconstruction: A = 2pi sum a W.
Eigen::MatrixXcd project(const ComplexField& field, std::size_t size);

struct Projection {
  Eigen::MatrixXcd coeffs;
  double tail = 0.0;  // ||A - 2pi sum a W|| / ||A||
};

/// project() plus the relative L2 norm of what the truncated basis misses.
Projection project_with_tail(const ComplexField& field, std::size_t size);

}  // namespace relwig
