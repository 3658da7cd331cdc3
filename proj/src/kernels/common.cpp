#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "relwig/kernels.hpp"

namespace relwig::kernels {

StarGeometry StarGeometry::make(const PhaseGrid& grid, double hbar, std::size_t padding) {
  if (!(hbar > 0.0) || !std::isfinite(hbar))
    throw std::invalid_argument("star product: hbar_eff must be finite and > 0");
  if (padding < 1) throw std::invalid_argument("star product: padding must be >= 1");
  StarGeometry g;
  g.nq = grid.nq;
  g.np = grid.np;
  g.m = padding * grid.np;
  g.hbar = hbar;
  const double two_pi = 2.0 * std::numbers::pi;
  g.kq_index.resize(g.nq);
  g.kq.resize(g.nq);
  for (std::size_t i = 0; i < g.nq; ++i) {
    g.kq_index[i] = fft_signed_index(i, g.nq);
    g.kq[i] = two_pi * static_cast<double>(g.kq_index[i]) / (static_cast<double>(g.nq) * grid.dq());
  }
  g.lp.resize(g.np);
  for (std::size_t j = 0; j < g.np; ++j)
    g.lp[j] = two_pi * static_cast<double>(fft_signed_index(j, g.np)) /
              (static_cast<double>(g.np) * grid.dp());
  g.half_shift.resize(g.nq * g.np);
  for (std::size_t i = 0; i < g.nq; ++i)
    for (std::size_t j = 0; j < g.np; ++j)
      g.half_shift[i * g.np + j] = std::polar(1.0, 0.5 * hbar * g.kq[i] * g.lp[j]);
  return g;
}

void shifted_row(const StarGeometry& geo, const cplx* row, std::size_t k, int sign,
                 const Fft& inverse_m, cplx* pad, cplx* out) {
  const std::size_t h = geo.np / 2;
  const cplx* ph = geo.half_shift.data() + k * geo.np;
  std::fill(pad, pad + geo.m, cplx(0.0, 0.0));
  auto phase = [&](std::size_t j) { return sign > 0 ? ph[j] : std::conj(ph[j]); };
  for (std::size_t j = 0; j < h; ++j) pad[j] = row[j] * phase(j);
  // index h is the Nyquist column, kept at zero
  for (std::size_t j = h + 1; j < geo.np; ++j) pad[geo.m - geo.np + j] = row[j] * phase(j);
  inverse_m.execute(pad, out);
}

std::vector<cplx> build_shift_cache(const StarGeometry& geo, const cplx* spectrum, int sign) {
  std::vector<cplx> cache(geo.nq * geo.nq * geo.m);
  const Fft inverse(geo.m, Fft::Direction::Backward);
  std::vector<cplx> pad(geo.m);
  for (std::size_t i = 0; i < geo.nq; ++i) {
    if (!geo.valid_bin(geo.kq_index[i])) continue;
    for (std::size_t j = 0; j < geo.nq; ++j) {
      if (!geo.valid_bin(geo.kq_index[j])) continue;
      shifted_row(geo, spectrum + i * geo.np, j, sign, inverse, pad.data(),
                  cache.data() + (i * geo.nq + j) * geo.m);
    }
  }
  return cache;
}

SeriesEstimate rotator_symbol_at(double lambda, double r2, Acceleration accel,
                                 const SeriesControl& control) {
  if (lambda == 0.0) return {1.0, true, 1, 0.0};  // every E(n) = 1: symbol of the identity
  const double x = 2.0 * r2;
  if (x / 2.0 > 700.0) {
    SeriesEstimate bad;
    bad.value = std::numeric_limits<double>::quiet_NaN();
    bad.last_delta = std::numeric_limits<double>::infinity();
    return bad;
  }
  SeriesControl ctl = control;
  ctl.min_terms = std::max(ctl.min_terms, static_cast<std::size_t>(std::ceil(x)) + 5);
  // l_prev, l_cur track L_k(x) e^{-x/2}
  double l_prev = 0.0, l_cur = std::exp(-0.5 * x);
  const double lam2 = lambda * lambda;
  auto term = [&](std::size_t k) {
    if (k > 0) {
      const double kk = static_cast<double>(k - 1);
      const double next = ((2.0 * kk + 1.0 - x) * l_cur - kk * l_prev) / (kk + 1.0);
      l_prev = l_cur;
      l_cur = next;
    }
    const double e = std::sqrt(1.0 + 2.0 * lam2 * (static_cast<double>(k) + 0.5));
    return (k % 2 ? -2.0 : 2.0) * e * l_cur;
  };
  return accelerated_sum(term, accel, ctl);
}

}  // namespace relwig::kernels
