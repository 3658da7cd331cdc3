#pragma once

// Per-point and per-row building blocks shared by the serial and OpenMP kernels.

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "relwig/free_particle.hpp"
#include "relwig/grid.hpp"
#include "relwig/spectra.hpp"
#include "relwig/special.hpp"

namespace relwig::kernels::detail {

/// Unit phase (q - ip)/r; 1 at the origin where every d > 0 term vanishes.
inline cplx unit_phase(double p, double q) {
  const double r = std::hypot(p, q);
  return r > 0.0 ? cplx(q / r, -p / r) : cplx(1.0, 0.0);
}

/// sum_{n,m} c(n,m) W_nm(p,q). h is scratch of at least c.rows() entries.
inline cplx synth_point(double p, double q, const Eigen::MatrixXcd& c, std::vector<double>& h) {
  const auto n = static_cast<std::size_t>(c.rows());
  const double x = 2.0 * (p * p + q * q);
  const cplx u = unit_phase(p, q);
  cplx ud(1.0, 0.0);
  cplx total(0.0, 0.0);
  for (std::size_t d = 0; d < n; ++d) {
    const std::size_t len = n - d;
    scaled_laguerre_family(static_cast<unsigned>(d), x, std::span<double>(h.data(), len));
    cplx lower(0.0, 0.0), upper(0.0, 0.0);
    for (std::size_t m = 0; m < len; ++m) {
      const double g = (m % 2 ? -h[m] : h[m]);
      lower += c(m + d, m) * g;
      if (d > 0) upper += c(m, m + d) * g;
    }
    total += lower * ud + upper * std::conj(ud);
    ud *= u;
  }
  return total / std::numbers::pi;
}

/// acc(n,m) += w * conj(W_nm(p,q)).
inline void project_point(double p, double q, cplx w, Eigen::MatrixXcd& acc,
                          std::vector<double>& h) {
  const auto n = static_cast<std::size_t>(acc.rows());
  const double x = 2.0 * (p * p + q * q);
  const cplx u = unit_phase(p, q);
  cplx ud(1.0 / std::numbers::pi, 0.0);
  for (std::size_t d = 0; d < n; ++d) {
    const std::size_t len = n - d;
    scaled_laguerre_family(static_cast<unsigned>(d), x, std::span<double>(h.data(), len));
    const cplx wl = w * std::conj(ud);  // conj(W_{m+d,m}) carries conj(u)^d
    const cplx wu = w * ud;
    for (std::size_t m = 0; m < len; ++m) {
      const double g = (m % 2 ? -h[m] : h[m]);
      acc(m + d, m) += wl * g;
      if (d > 0) acc(m, m + d) += wu * g;
    }
    ud *= u;
  }
}

/// table[iq * (2 np - 1) + (k + np - 1)] = exp(-2i k dp q_iq).
inline std::vector<cplx> free_phase_table(const PhaseGrid& grid) {
  const std::size_t width = 2 * grid.np - 1;
  std::vector<cplx> table(grid.nq * width);
  const long np = static_cast<long>(grid.np);
  for (std::size_t iq = 0; iq < grid.nq; ++iq) {
    const double q = grid.q(iq);
    for (long k = -(np - 1); k <= np - 1; ++k)
      table[iq * width + static_cast<std::size_t>(k + np - 1)] =
          std::polar(1.0, -2.0 * static_cast<double>(k) * grid.dp() * q);
  }
  return table;
}

/// One p-row of the free Wigner pair integral. f is scratch of 2 np - 1 entries.
inline void free_wigner_row(const PhaseGrid& grid, std::span<const cplx> psi, WignerKernel kernel,
                            const std::vector<cplx>& table, std::size_t ip, std::vector<cplx>& f,
                            cplx* out_row) {
  const long np = static_cast<long>(grid.np);
  const long i = static_cast<long>(ip);
  const std::size_t width = 2 * grid.np - 1;
  const long kmax = std::min(i, np - 1 - i);
  std::fill(f.begin(), f.end(), cplx(0.0, 0.0));
  for (long k = -kmax; k <= kmax; ++k) {
    const auto a = static_cast<std::size_t>(i + k), b = static_cast<std::size_t>(i - k);
    cplx v = std::conj(psi[a]) * psi[b];
    if (kernel == WignerKernel::Epsilon) v *= epsilon_continuous(grid.p(a), grid.p(b));
    f[static_cast<std::size_t>(k + np - 1)] = v;
  }
  const double weight = grid.dp() / std::numbers::pi;  // dP / 2pi with dP = 2 dp
  const std::size_t lo = static_cast<std::size_t>(np - 1 - kmax);
  const std::size_t hi = static_cast<std::size_t>(np - 1 + kmax);
  for (std::size_t iq = 0; iq < grid.nq; ++iq) {
    const cplx* t = table.data() + iq * width;
    cplx s(0.0, 0.0);
    for (std::size_t j = lo; j <= hi; ++j) s += f[j] * t[j];
    out_row[iq] = s * weight;
  }
}

}  // namespace relwig::kernels::detail
