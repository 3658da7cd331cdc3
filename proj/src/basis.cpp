#include "relwig/basis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "relwig/kernels.hpp"
#include "relwig/special.hpp"

namespace relwig {
namespace {

void require_rotator_units(const PhaseGrid& grid, const char* what) {
  if (grid.units != UnitsTag::RotatorDimensionless)
    throw std::invalid_argument(std::string(what) + ": grid must be in rotator units");
}

}  // namespace

cplx wigner_basis_value(std::size_t n, std::size_t m, double p, double q) {
  const std::size_t lo = std::min(n, m);
  const std::size_t d = std::max(n, m) - lo;
  std::vector<double> h(lo + 1);
  scaled_laguerre_family(static_cast<unsigned>(d), 2.0 * (p * p + q * q), h);
  const double r = std::hypot(p, q);
  cplx u = r > 0.0 ? cplx(q / r, -p / r) : cplx(1.0, 0.0);
  if (n < m) u = std::conj(u);
  const double sign = lo % 2 ? -1.0 : 1.0;
  return sign * h[lo] * std::pow(u, static_cast<int>(d)) / std::numbers::pi;
}

BasisMatrixElement wigner_basis_element(std::size_t n, std::size_t m, const PhaseGrid& grid) {
  require_rotator_units(grid, "wigner_basis_element");
  return {n, m, ComplexField::sample(grid, [&](double p, double q) {
            return wigner_basis_value(n, m, p, q);
          })};
}

ComplexField diagonal_wigner(std::size_t n, const PhaseGrid& grid) {
  require_rotator_units(grid, "diagonal_wigner");
  return ComplexField::sample(grid, [&](double p, double q) {
    const double r2 = p * p + q * q;
    const double sign = n % 2 ? -1.0 : 1.0;
    return cplx(sign * laguerre(static_cast<unsigned>(n), 0, 2.0 * r2) * std::exp(-r2) /
                    std::numbers::pi,
                0.0);
  });
}

ComplexField synthesize(const PhaseGrid& grid, const Eigen::MatrixXcd& coeffs) {
  require_rotator_units(grid, "synthesize");
  if (coeffs.rows() != coeffs.cols())
    throw std::invalid_argument("synthesize: coefficient matrix must be square");
  ComplexField out(grid);
  kernels::omp::synthesize(grid, coeffs, out.data());
  return out;
}

Eigen::MatrixXcd project(const ComplexField& field, std::size_t size) {
  require_rotator_units(field.grid(), "project");
  if (size == 0) throw std::invalid_argument("project: size must be >= 1");
  return kernels::omp::project(field.grid(), field.data(), size);
}

Projection project_with_tail(const ComplexField& field, std::size_t size) {
  Projection out;
  out.coeffs = project(field, size);
  ComplexField back = synthesize(field.grid(), out.coeffs * (2.0 * std::numbers::pi));
  const double norm = field.l2_norm();
  out.tail = norm > 0.0 ? l2_distance(back, field) / norm : 0.0;
  return out;
}

}  // namespace relwig
