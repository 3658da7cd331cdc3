#pragma once

// Data-parallel inner loops. Every kernel exists twice with identical
// signatures: kernels::serial (the reference, kept for testing) and
// kernels::omp (OpenMP). The public modules call the omp variants; tests and
// bench/ compare the two.

#include <cstddef>
#include <cstdlib>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "relwig/accel.hpp"
#include "relwig/fft.hpp"
#include "relwig/free_particle.hpp"
#include "relwig/grid.hpp"

namespace relwig::kernels {

/// Wavenumber bookkeeping for the FFT star product on a grid.
///
/// Spectra are stored q-major: row = q-wavenumber bin (nq rows), column =
/// p-wavenumber bin (np columns), FFTW-unnormalised, with the Nyquist row and
/// column zeroed. p-rows are evaluated on a padded grid of m = padding * np
/// points before products are formed.
struct StarGeometry {
  std::size_t nq = 0, np = 0, m = 0;
  double hbar = 1.0;
  std::vector<long> kq_index;  // signed bin index per q row
  std::vector<double> kq;      // q wavenumber per row
  std::vector<double> lp;      // p wavenumber per column
  std::vector<cplx> half_shift;  // [i*np + j] = exp(i lp[j] hbar kq[i] / 2)

  static StarGeometry make(const PhaseGrid& grid, double hbar, std::size_t padding);
  bool valid_bin(long k) const { return 2 * std::abs(k) < static_cast<long>(nq); }
};

/// One operand of a star product. shift_cache, when present, holds row i
/// shifted by sign * hbar * kq[j] / 2 at offset (i * nq + j) * m, with
/// sign = +1 for a left operand and -1 for a right operand.
struct StarOperand {
  const cplx* spectrum = nullptr;
  const cplx* shift_cache = nullptr;
};

/// Padded-grid samples of spectrum row `row` shifted in p by sign * hbar * kq[k] / 2.
/// `inverse_m` is a backward transform of length m; `pad` is m scratch entries.
void shifted_row(const StarGeometry& geo, const cplx* row, std::size_t k, int sign,
                 const Fft& inverse_m, cplx* pad, cplx* out);

std::vector<cplx> build_shift_cache(const StarGeometry& geo, const cplx* spectrum, int sign);

/// Radial part of the rotator Hamiltonian symbol at one r^2 = p^2 + q^2.
SeriesEstimate rotator_symbol_at(double lambda, double r2, Acceleration accel,
                                 const SeriesControl& control);

namespace serial {

/// out[ip*nq+iq] = sum_{n,m} coeffs(n,m) W_nm(p_ip, q_iq).
void synthesize(const PhaseGrid& grid, const Eigen::MatrixXcd& coeffs, cplx* out);

/// a(n,m) = sum over grid of field * conj(W_nm) * dp dq, for n,m < size.
Eigen::MatrixXcd project(const PhaseGrid& grid, const cplx* field, std::size_t size);

/// c_pad[K*m + j] = sum over wavenumber pairs (k1 + k2 = K) of the shifted
/// left row k1 times the shifted right row k2, on the padded p grid.
void star_accumulate(const StarGeometry& geo, StarOperand left, StarOperand right, cplx* c_pad);

std::vector<SeriesEstimate> rotator_symbol_radii(double lambda, std::span<const double> r2,
                                                 Acceleration accel, const SeriesControl& control);

/// Free-particle Wigner pair integral, one p-row per outer iteration.
void free_wigner(const PhaseGrid& grid, std::span<const cplx> psi, WignerKernel kernel, cplx* out);

}  // namespace serial

namespace omp {

void synthesize(const PhaseGrid& grid, const Eigen::MatrixXcd& coeffs, cplx* out);
Eigen::MatrixXcd project(const PhaseGrid& grid, const cplx* field, std::size_t size);
void star_accumulate(const StarGeometry& geo, StarOperand left, StarOperand right, cplx* c_pad);
std::vector<SeriesEstimate> rotator_symbol_radii(double lambda, std::span<const double> r2,
                                                 Acceleration accel, const SeriesControl& control);
void free_wigner(const PhaseGrid& grid, std::span<const cplx> psi, WignerKernel kernel, cplx* out);

}  // namespace omp

}  // namespace relwig::kernels
