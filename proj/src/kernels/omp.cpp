#include <stdexcept>

#include "detail.hpp"
#include "relwig/kernels.hpp"

namespace relwig::kernels::omp {

void synthesize(const PhaseGrid& grid, const Eigen::MatrixXcd& coeffs, cplx* out) {
  const long np = static_cast<long>(grid.np);
#pragma omp parallel
  {
    std::vector<double> h(static_cast<std::size_t>(coeffs.rows()) + 1);
#pragma omp for schedule(static)
    for (long ip = 0; ip < np; ++ip) {
      const auto i = static_cast<std::size_t>(ip);
      for (std::size_t iq = 0; iq < grid.nq; ++iq)
        out[grid.index(i, iq)] = detail::synth_point(grid.p(i), grid.q(iq), coeffs, h);
    }
  }
}

Eigen::MatrixXcd project(const PhaseGrid& grid, const cplx* field, std::size_t size) {
  const long n = static_cast<long>(size);
  const long np = static_cast<long>(grid.np);
  const double w = grid.cell_area();
  // Per-row partial sums are combined in row order so the result does not
  // depend on the thread count.
  std::vector<Eigen::MatrixXcd> rows(grid.np);
#pragma omp parallel
  {
    std::vector<double> h(size + 1);
#pragma omp for schedule(static)
    for (long ip = 0; ip < np; ++ip) {
      const auto i = static_cast<std::size_t>(ip);
      Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, n);
      for (std::size_t iq = 0; iq < grid.nq; ++iq)
        detail::project_point(grid.p(i), grid.q(iq), field[grid.index(i, iq)] * w, acc, h);
      rows[i] = std::move(acc);
    }
  }
  Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& r : rows) total += r;
  return total;
}

void star_accumulate(const StarGeometry& geo, StarOperand left, StarOperand right, cplx* c_pad) {
  const Fft inverse(geo.m, Fft::Direction::Backward);
  const long nq = static_cast<long>(geo.nq);
#pragma omp parallel
  {
    std::vector<cplx> pad(geo.m), ra(geo.m), rb(geo.m);
#pragma omp for schedule(dynamic)
    for (long irow = 0; irow < nq; ++irow) {
      const auto i = static_cast<std::size_t>(irow);
      cplx* row = c_pad + i * geo.m;
      std::fill(row, row + geo.m, cplx(0.0, 0.0));
      const long kk = geo.kq_index[i];
      if (!geo.valid_bin(kk)) continue;
      for (std::size_t i1 = 0; i1 < geo.nq; ++i1) {
        const long k1 = geo.kq_index[i1];
        const long k2 = kk - k1;
        if (!geo.valid_bin(k1) || !geo.valid_bin(k2)) continue;
        const auto i2 = static_cast<std::size_t>(k2 >= 0 ? k2 : k2 + nq);
        const cplx* a;
        const cplx* b;
        if (left.shift_cache) {
          a = left.shift_cache + (i1 * geo.nq + i2) * geo.m;
        } else {
          shifted_row(geo, left.spectrum + i1 * geo.np, i2, +1, inverse,
                      pad.data(), ra.data());
          a = ra.data();
        }
        if (right.shift_cache) {
          b = right.shift_cache + (i2 * geo.nq + i1) * geo.m;
        } else {
          shifted_row(geo, right.spectrum + i2 * geo.np, i1, -1, inverse,
                      pad.data(), rb.data());
          b = rb.data();
        }
        for (std::size_t j = 0; j < geo.m; ++j) row[j] += a[j] * b[j];
      }
    }
  }
}

std::vector<SeriesEstimate> rotator_symbol_radii(double lambda, std::span<const double> r2,
                                                 Acceleration accel, const SeriesControl& control) {
  std::vector<SeriesEstimate> out(r2.size());
  const long n = static_cast<long>(r2.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (long i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] =
        rotator_symbol_at(lambda, r2[static_cast<std::size_t>(i)], accel, control);
  return out;
}

void free_wigner(const PhaseGrid& grid, std::span<const cplx> psi, WignerKernel kernel, cplx* out) {
  if (psi.size() != grid.np) throw std::invalid_argument("free_wigner: psi size must equal np");
  const auto table = detail::free_phase_table(grid);
  const long np = static_cast<long>(grid.np);
#pragma omp parallel
  {
    std::vector<cplx> f(2 * grid.np - 1);
#pragma omp for schedule(static)
    for (long ip = 0; ip < np; ++ip)
      detail::free_wigner_row(grid, psi, kernel, table, static_cast<std::size_t>(ip), f,
                              out + static_cast<std::size_t>(ip) * grid.nq);
  }
}

}  // namespace relwig::kernels::omp
