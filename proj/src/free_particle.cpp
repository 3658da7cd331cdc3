#include "relwig/free_particle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "relwig/kernels.hpp"

namespace relwig {

const char* to_string(WignerKernel kernel) {
  return kernel == WignerKernel::Unit ? "unit" : "epsilon";
}

WignerKernel parse_wigner_kernel(const std::string& name) {
  if (name == "unit") return WignerKernel::Unit;
  if (name == "epsilon") return WignerKernel::Epsilon;
  throw std::invalid_argument("unknown Wigner kernel '" + name + "' (expected unit|epsilon)");
}

std::vector<cplx> gaussian_momentum_state(const PhaseGrid& grid, double width, double p0,
                                          double q0) {
  if (!(width > 0.0) || !std::isfinite(width))
    throw std::invalid_argument("gaussian_momentum_state: width must be finite and > 0");
  std::vector<cplx> psi(grid.np);
  const double norm = std::pow(std::numbers::pi * width * width, -0.25);
  for (std::size_t i = 0; i < grid.np; ++i) {
    const double s = (grid.p(i) - p0) / width;
    psi[i] = std::polar(norm * std::exp(-0.5 * s * s), -grid.p(i) * q0);
  }
  return psi;
}

ComplexField free_wigner_pair(std::span<const cplx> psi, const PhaseGrid& grid,
                              WignerKernel kernel) {
  if (grid.units != UnitsTag::FreeParticle)
    throw std::invalid_argument("free_wigner_pair: grid must be in free-particle units");
  if (psi.size() != grid.np)
    throw std::invalid_argument("free_wigner_pair: psi needs one sample per p node (" +
                                std::to_string(grid.np) + ")");
  double peak = 0.0;
  for (const auto& v : psi) peak = std::max(peak, std::abs(v));
  if (!(peak > 0.0)) throw std::invalid_argument("free_wigner_pair: psi is identically zero");
  const double edge = std::max(std::abs(psi.front()), std::abs(psi.back()));
  if (edge > 1e-4 * peak)
    throw std::invalid_argument(
        "free_wigner_pair: psi support exceeds the grid p-range (edge/peak = " +
        format_double(edge / peak) + "); widen the p extent");
  if (grid.q_max - grid.q_min > std::numbers::pi / grid.dp())
    throw std::invalid_argument(
        "free_wigner_pair: q range exceeds the quadrature period pi/dp; refine the p grid");
  ComplexField out(grid);
  kernels::omp::free_wigner(grid, psi, kernel, out.data());
  return out;
}

}  // namespace relwig
