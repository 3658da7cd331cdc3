#include "relwig/star.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "relwig/fft.hpp"
#include "relwig/kernels.hpp"

namespace relwig {
namespace {

constexpr std::size_t stencil_width = 11;

void require_compatible(const SymbolField& a, const SymbolField& b, const char* what) {
  require_same_grid(a.field, b.field, what);
  if (a.hbar != b.hbar)
    throw std::invalid_argument(std::string(what) + ": operands carry different hbar_eff");
  if (!(a.hbar > 0.0)) throw std::invalid_argument(std::string(what) + ": hbar_eff must be > 0");
}

// Fornberg's recursion: weights[k][j] for the k-th derivative at z from nodes x.
std::vector<std::vector<double>> fornberg(double z, const std::vector<double>& x, unsigned maxd) {
  const std::size_t n = x.size();
  std::vector<std::vector<double>> c(maxd + 1, std::vector<double>(n, 0.0));
  double c1 = 1.0, c4 = x[0] - z;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const unsigned mn = std::min<unsigned>(static_cast<unsigned>(i), maxd);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (unsigned k = mn; k >= 1; --k)
          c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (unsigned k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

// Transposed (q-major) forward spectrum with the Nyquist row and column zeroed.
std::vector<cplx> q_major_spectrum(const ComplexField& f) {
  const PhaseGrid& g = f.grid();
  std::vector<cplx> t(g.size()), s(g.size());
  for (std::size_t ip = 0; ip < g.np; ++ip)
    for (std::size_t iq = 0; iq < g.nq; ++iq) t[iq * g.np + ip] = f.at(ip, iq);
  Fft(g.nq, g.np, Fft::Direction::Forward).execute(t.data(), s.data());
  for (std::size_t j = 0; j < g.np; ++j) s[(g.nq / 2) * g.np + j] = 0.0;
  for (std::size_t i = 0; i < g.nq; ++i) s[i * g.np + g.np / 2] = 0.0;
  return s;
}

ComplexField finish(const kernels::StarGeometry& geo, const std::vector<cplx>& c_pad,
                    const PhaseGrid& grid) {
  const std::size_t np = geo.np, nq = geo.nq, m = geo.m, h = np / 2;
  const Fft fwd(m, Fft::Direction::Forward);
  std::vector<cplx> tmp(m), spec(nq * np, cplx(0.0, 0.0)), out(nq * np);
  for (std::size_t i = 0; i < nq; ++i) {
    if (!geo.valid_bin(geo.kq_index[i])) continue;
    fwd.execute(c_pad.data() + i * m, tmp.data());
    for (std::size_t j = 0; j < h; ++j) spec[i * np + j] = tmp[j];
    for (std::size_t j = h + 1; j < np; ++j) spec[i * np + j] = tmp[m - np + j];
  }
  Fft(nq, np, Fft::Direction::Backward).execute(spec.data(), out.data());
  const double scale =
      1.0 / (static_cast<double>(np) * np * static_cast<double>(nq) * nq * static_cast<double>(m));
  ComplexField result(grid);
  for (std::size_t ip = 0; ip < np; ++ip)
    for (std::size_t iq = 0; iq < nq; ++iq) result.at(ip, iq) = out[iq * np + ip] * scale;
  return result;
}

ComplexField fft_star(const ComplexField& a, const ComplexField& b, double hbar,
                      std::size_t padding) {
  const auto geo = kernels::StarGeometry::make(a.grid(), hbar, padding);
  const auto sa = q_major_spectrum(a);
  const auto sb = q_major_spectrum(b);
  std::vector<cplx> c_pad(geo.nq * geo.m);
  kernels::omp::star_accumulate(geo, {sa.data(), nullptr}, {sb.data(), nullptr}, c_pad.data());
  return finish(geo, c_pad, a.grid());
}

ComplexField series_star(const ComplexField& a, const ComplexField& b, double hbar,
                         unsigned order) {
  // a * b = sum_k (i hbar/2)^k / k! sum_j C(k,j) (-1)^j (d_q^{k-j} d_p^j a)(d_p^{k-j} d_q^j b)
  std::map<std::pair<unsigned, unsigned>, ComplexField> da, db;  // key (q order, p order)
  auto mixed = [](std::map<std::pair<unsigned, unsigned>, ComplexField>& memo,
                  const ComplexField& f, unsigned nq_ord, unsigned np_ord) -> const ComplexField& {
    auto key = std::make_pair(nq_ord, np_ord);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    ComplexField d = derivative(derivative(f, 1, nq_ord), 0, np_ord);
    return memo.emplace(key, std::move(d)).first->second;
  };
  ComplexField out(a.grid());
  cplx pref(1.0, 0.0);
  for (unsigned k = 0; k <= order; ++k) {
    if (k > 0) pref *= cplx(0.0, 0.5 * hbar) / static_cast<double>(k);
    double binom = 1.0;
    for (unsigned j = 0; j <= k; ++j) {
      if (j > 0) binom = binom * (k - j + 1) / j;
      const ComplexField& fa = mixed(da, a, k - j, j);
      const ComplexField& fb = mixed(db, b, j, k - j);
      const cplx w = pref * binom * (j % 2 ? -1.0 : 1.0);
      for (std::size_t i = 0; i < out.size(); ++i) out.values()[i] += w * fa.values()[i] * fb.values()[i];
    }
  }
  return out;
}

}  // namespace

void StarBackend::validate() const {
  if (kind == Kind::TruncatedSeries && order < 1)
    throw std::invalid_argument("TruncatedSeries backend needs order K >= 1");
  if (padding < 1) throw std::invalid_argument("star backend padding must be >= 1");
}

std::string StarBackend::describe() const {
  return kind == Kind::IntegralFFT ? "integral-fft(padding=" + std::to_string(padding) + ")"
                                   : "truncated-series(K=" + std::to_string(order) + ")";
}

void require_finite(const ComplexField& f, const char* what) {
  const auto [ip, iq] = f.first_non_finite();
  if (ip < f.grid().np)
    throw std::runtime_error(std::string(what) + ": non-finite value at p=" +
                             format_double(f.grid().p(ip)) + ", q=" + format_double(f.grid().q(iq)));
}

ComplexField derivative(const ComplexField& f, int axis, unsigned order) {
  if (order == 0) return f;
  if (axis != 0 && axis != 1) throw std::invalid_argument("derivative: axis must be 0 (p) or 1 (q)");
  const PhaseGrid& g = f.grid();
  const std::size_t n = axis == 0 ? g.np : g.nq;
  const std::size_t lines = axis == 0 ? g.nq : g.np;
  const std::size_t width = std::min(stencil_width, n);
  ComplexField out(g);
  if (order >= width) return out;  // beyond the stencil's polynomial degree
  const double h = axis == 0 ? g.dp() : g.dq();
  std::vector<double> nodes(width);
  for (std::size_t j = 0; j < width; ++j) nodes[j] = static_cast<double>(j);
  std::vector<std::vector<double>> weights(width);
  const double scale = std::pow(h, -static_cast<double>(order));
  for (std::size_t z = 0; z < width; ++z) {
    weights[z] = fornberg(static_cast<double>(z), nodes, order)[order];
    for (auto& w : weights[z]) w *= scale;
  }
  const std::size_t half = width / 2;
  for (std::size_t line = 0; line < lines; ++line) {
    auto at = [&](std::size_t i) -> std::size_t {
      return axis == 0 ? g.index(i, line) : g.index(line, i);
    };
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t start = std::min(i >= half ? i - half : 0, n - width);
      const auto& w = weights[i - start];
      cplx s(0.0, 0.0);
      for (std::size_t j = 0; j < width; ++j) s += w[j] * f.values()[at(start + j)];
      out.values()[at(i)] = s;
    }
  }
  return out;
}

ComplexField poisson_bracket(const ComplexField& a, const ComplexField& b) {
  require_same_grid(a, b, "poisson_bracket");
  return hadamard(derivative(a, 1, 1), derivative(b, 0, 1)) -
         hadamard(derivative(a, 0, 1), derivative(b, 1, 1));
}

SymbolField star(const SymbolField& a, const SymbolField& b, const StarBackend& backend) {
  backend.validate();
  require_compatible(a, b, "star");
  require_finite(a.field, "star (left operand)");
  require_finite(b.field, "star (right operand)");
  SymbolField out{backend.kind == StarBackend::Kind::IntegralFFT
                      ? fft_star(a.field, b.field, a.hbar, backend.padding)
                      : series_star(a.field, b.field, a.hbar, backend.order),
                  a.hbar};
  require_finite(out.field, "star (result)");
  return out;
}

SymbolField moyal_bracket(const SymbolField& a, const SymbolField& b, const StarBackend& backend) {
  SymbolField ab = star(a, b, backend);
  const SymbolField ba = star(b, a, backend);
  ab.field -= ba.field;
  ab.field *= 1.0 / cplx(0.0, a.hbar);
  return ab;
}

SymbolField anti_moyal_bracket(const SymbolField& a, const SymbolField& b,
                               const StarBackend& backend) {
  SymbolField ab = star(a, b, backend);
  const SymbolField ba = star(b, a, backend);
  ab.field += ba.field;
  ab.field *= 1.0 / cplx(0.0, a.hbar);
  return ab;
}

StarExpResult star_exp(const SymbolField& a, cplx t, const StarBackend& backend, unsigned nterms) {
  if (nterms < 1) throw std::invalid_argument("star_exp: nterms must be >= 1");
  require_finite(a.field, "star_exp");
  StarExpResult res;
  const double size = a.field.max_abs() * std::abs(t);
  unsigned s = 0;
  while (std::ldexp(size, -static_cast<int>(s)) > 1.0) ++s;
  const cplx ts = std::ldexp(1.0, -static_cast<int>(s)) * t;

  SymbolField sum{ComplexField(a.grid(), cplx(1.0, 0.0)), a.hbar};
  SymbolField term = sum;
  std::vector<double> norms{1.0};
  for (unsigned k = 1; k < nterms; ++k) {
    term = star(term, a, backend);
    term.field *= ts / static_cast<double>(k);
    sum.field += term.field;
    norms.push_back(term.field.max_abs());
  }
  const double total = std::max(sum.field.max_abs(), 1e-300);
  res.residual = norms.back() / total;
  res.diverged = norms.size() >= 3 && norms.back() > norms[norms.size() - 2] &&
                 norms[norms.size() - 2] > norms[norms.size() - 3];
  for (unsigned i = 0; i < s; ++i) sum = star(sum, sum, backend);
  res.value = std::move(sum);
  res.squarings = s;
  return res;
}

struct MoyalOperator::Impl {
  SymbolField h;
  kernels::StarGeometry geo;
  std::vector<cplx> spectrum;
  std::vector<cplx> as_left;   // rows of h shifted by +hbar k / 2
  std::vector<cplx> as_right;  // rows of h shifted by -hbar k / 2

  ComplexField apply(const ComplexField& w, bool h_on_left) const {
    require_same_grid(h.field, w, "MoyalOperator");
    require_finite(w, "MoyalOperator (operand)");
    const auto sw = q_major_spectrum(w);
    std::vector<cplx> c_pad(geo.nq * geo.m);
    const kernels::StarOperand hop{spectrum.data(),
                                   h_on_left ? (as_left.empty() ? nullptr : as_left.data())
                                             : (as_right.empty() ? nullptr : as_right.data())};
    const kernels::StarOperand wop{sw.data(), nullptr};
    if (h_on_left)
      kernels::omp::star_accumulate(geo, hop, wop, c_pad.data());
    else
      kernels::omp::star_accumulate(geo, wop, hop, c_pad.data());
    ComplexField out = finish(geo, c_pad, w.grid());
    require_finite(out, "MoyalOperator (result)");
    return out;
  }
};

MoyalOperator::MoyalOperator(const SymbolField& h, std::size_t padding, bool cache)
    : impl_(std::make_unique<Impl>()) {
  require_finite(h.field, "MoyalOperator (symbol)");
  impl_->h = h;
  impl_->geo = kernels::StarGeometry::make(h.grid(), h.hbar, padding);
  impl_->spectrum = q_major_spectrum(h.field);
  if (cache) {
    impl_->as_left = kernels::build_shift_cache(impl_->geo, impl_->spectrum.data(), +1);
    impl_->as_right = kernels::build_shift_cache(impl_->geo, impl_->spectrum.data(), -1);
  }
}

MoyalOperator::~MoyalOperator() = default;
MoyalOperator::MoyalOperator(MoyalOperator&&) noexcept = default;
MoyalOperator& MoyalOperator::operator=(MoyalOperator&&) noexcept = default;

ComplexField MoyalOperator::left(const ComplexField& w) const { return impl_->apply(w, true); }
ComplexField MoyalOperator::right(const ComplexField& w) const { return impl_->apply(w, false); }

ComplexField MoyalOperator::bracket(const ComplexField& w) const {
  ComplexField out = left(w) - right(w);
  out *= 1.0 / cplx(0.0, impl_->h.hbar);
  return out;
}

ComplexField MoyalOperator::anti_bracket(const ComplexField& w) const {
  ComplexField out = left(w) + right(w);
  out *= 1.0 / cplx(0.0, impl_->h.hbar);
  return out;
}

const SymbolField& MoyalOperator::symbol() const { return impl_->h; }

}  // namespace relwig
