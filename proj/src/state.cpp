#include "relwig/state.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "relwig/basis.hpp"
#include "relwig/special.hpp"

namespace relwig {
namespace {

void require_size(const ChargeFactor& f, std::size_t n, const char* what) {
  if (f.size() < n)
    throw std::invalid_argument(std::string(what) + ": charge factors cover " +
                                std::to_string(f.size()) + " levels, state needs " +
                                std::to_string(n));
}

bool is_zero(const Eigen::MatrixXcd& m) { return m.size() == 0 || m.cwiseAbs().maxCoeff() == 0.0; }

}  // namespace

const char* to_string(Axis axis) { return axis == Axis::Position ? "position" : "momentum"; }

Axis parse_axis(const std::string& name) {
  if (name == "position" || name == "q") return Axis::Position;
  if (name == "momentum" || name == "p") return Axis::Momentum;
  throw std::invalid_argument("unknown observable '" + name + "' (expected position|momentum)");
}

double ChargeStateVector::norm() const { return plus.squaredNorm() + minus.squaredNorm(); }

void ChargeStateVector::validate(double tol) const {
  if (plus.size() != minus.size() || plus.size() == 0)
    throw std::invalid_argument("charge state: C_plus and C_minus must be non-empty and equal length");
  if (!plus.allFinite() || !minus.allFinite())
    throw std::invalid_argument("charge state: non-finite coefficient");
  if (std::abs(norm() - 1.0) > tol)
    throw std::invalid_argument("charge state: norm " + format_double(norm()) + " differs from 1");
}

ChargeStateVector ChargeStateVector::eigenstate(std::size_t n_levels, std::size_t n, Branch b) {
  if (n >= n_levels) throw std::invalid_argument("eigenstate: level beyond truncation");
  ChargeStateVector s{Eigen::VectorXcd::Zero(static_cast<long>(n_levels)),
                      Eigen::VectorXcd::Zero(static_cast<long>(n_levels))};
  (b == Branch::Plus ? s.plus : s.minus)(static_cast<long>(n)) = 1.0;
  return s;
}

ChargeStateVector ChargeStateVector::superposition(
    std::size_t n_levels, const std::vector<std::pair<std::size_t, cplx>>& terms) {
  ChargeStateVector s{Eigen::VectorXcd::Zero(static_cast<long>(n_levels)),
                      Eigen::VectorXcd::Zero(static_cast<long>(n_levels))};
  for (const auto& [n, c] : terms) {
    if (n >= n_levels) throw std::invalid_argument("superposition: level beyond truncation");
    s.plus(static_cast<long>(n)) += c;
  }
  const double nrm = s.plus.norm();
  if (!(nrm > 0.0)) throw std::invalid_argument("superposition: zero vector");
  s.plus /= nrm;
  return s;
}

CoefficientMatrices CoefficientMatrices::from_state(const ChargeStateVector& s) {
  if (s.plus.size() != s.minus.size())
    throw std::invalid_argument("charge state: C_plus and C_minus lengths differ");
  // entry (m,n) = C*_m C_n
  CoefficientMatrices c;
  c.even_plus = s.plus.conjugate() * s.plus.transpose();
  c.even_minus = s.minus.conjugate() * s.minus.transpose();
  c.odd_plus = s.plus.conjugate() * s.minus.transpose();
  c.odd_minus = s.minus.conjugate() * s.plus.transpose();
  return c;
}

CoefficientMatrices CoefficientMatrices::zero(std::size_t n) {
  const auto z = Eigen::MatrixXcd::Zero(static_cast<long>(n), static_cast<long>(n));
  return {z, z, z, z};
}

CoefficientMatrices CoefficientMatrices::mixture(
    const std::vector<std::pair<double, ChargeStateVector>>& parts) {
  if (parts.empty()) throw std::invalid_argument("mixture: no components");
  CoefficientMatrices out = zero(parts.front().second.size());
  double wsum = 0.0;
  for (const auto& [w, s] : parts) {
    if (!(w >= 0.0)) throw std::invalid_argument("mixture: weights must be >= 0");
    if (s.size() != out.size()) throw std::invalid_argument("mixture: truncation sizes differ");
    const auto c = from_state(s);
    out.even_plus += w * c.even_plus;
    out.even_minus += w * c.even_minus;
    out.odd_plus += w * c.odd_plus;
    out.odd_minus += w * c.odd_minus;
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > 1e-12) throw std::invalid_argument("mixture: weights must sum to 1");
  return out;
}

double CoefficientMatrices::trace() const {
  return even_plus.trace().real() + even_minus.trace().real();
}

double CoefficientMatrices::structure_residual() const {
  double r = 0.0;
  r = std::max(r, (even_plus - even_plus.adjoint()).cwiseAbs().maxCoeff());
  r = std::max(r, (even_minus - even_minus.adjoint()).cwiseAbs().maxCoeff());
  r = std::max(r, (odd_minus - odd_plus.adjoint()).cwiseAbs().maxCoeff());
  return r;
}

void CoefficientMatrices::validate(double tol) const {
  const long n = even_plus.rows();
  for (const auto* m : {&even_plus, &even_minus, &odd_plus, &odd_minus})
    if (m->rows() != n || m->cols() != n || n == 0)
      throw std::invalid_argument("coefficient matrices: all four must be N x N with N >= 1");
  for (const auto* m : {&even_plus, &even_minus, &odd_plus, &odd_minus})
    if (!m->allFinite()) throw std::invalid_argument("coefficient matrices: non-finite entry");
  if (structure_residual() > tol)
    throw std::invalid_argument("coefficient matrices: Hermiticity/conjugacy residual " +
                                format_double(structure_residual()));
}

DecoherenceKernel::DecoherenceKernel(Eigen::MatrixXcd a) : a_(std::move(a)) {
  if (a_.rows() != a_.cols() || a_.rows() == 0)
    throw std::invalid_argument("decoherence kernel: must be a non-empty square matrix");
  if ((a_ - a_.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("decoherence kernel: not Hermitian");
  bool all_one = true;
  for (long i = 0; i < a_.rows(); ++i) {
    if (std::abs(a_(i, i) - 1.0) > 1e-12)
      throw std::invalid_argument("decoherence kernel: diagonal must be 1");
    for (long j = 0; j < a_.cols(); ++j) {
      if (i == j) continue;
      const double mag = std::abs(a_(i, j));
      if (!(mag <= 1.0)) throw std::invalid_argument("decoherence kernel: |a(m,n)| must not exceed 1");
      all_one = all_one && a_(i, j) == cplx(1.0, 0.0);
    }
  }
  if (!all_one)
    for (long i = 0; i < a_.rows(); ++i)
      for (long j = 0; j < a_.cols(); ++j)
        if (i != j && !(std::abs(a_(i, j)) < 1.0))
          throw std::invalid_argument(
              "decoherence kernel: |a(m,n)| < 1 required off the diagonal");
}

DecoherenceKernel DecoherenceKernel::gaussian(std::size_t n, double gamma) {
  if (!(gamma >= 0.0)) throw std::invalid_argument("decoherence kernel: gamma must be >= 0");
  Eigen::MatrixXcd a(static_cast<long>(n), static_cast<long>(n));
  for (long i = 0; i < a.rows(); ++i)
    for (long j = 0; j < a.cols(); ++j) {
      const double d = static_cast<double>(i - j);
      a(i, j) = i == j ? 1.0 : std::exp(-gamma * d * d);
    }
  return DecoherenceKernel(std::move(a));
}

CoefficientMatrices apply_decoherence(const CoefficientMatrices& coeffs,
                                      const DecoherenceKernel& kernel) {
  if (kernel.size() != coeffs.size())
    throw std::invalid_argument("apply_decoherence: kernel size " + std::to_string(kernel.size()) +
                                " != state size " + std::to_string(coeffs.size()));
  CoefficientMatrices out = coeffs;
  out.even_plus = coeffs.even_plus.cwiseProduct(kernel.matrix());
  out.even_minus = coeffs.even_minus.cwiseProduct(kernel.matrix());
  return out;
}

ComplexField WignerComponents::total() const {
  return even_plus + even_minus + odd_plus + odd_minus;
}

Eigen::MatrixXcd even_wigner_coefficients(const Eigen::MatrixXcd& rho, const ChargeFactor& f) {
  const long n = rho.rows();
  require_size(f, static_cast<std::size_t>(n), "even_wigner_coefficients");
  return f.even.topLeftCorner(n, n).cast<cplx>().cwiseProduct(rho).transpose();
}

Eigen::MatrixXcd odd_wigner_coefficients(const Eigen::MatrixXcd& sigma, const ChargeFactor& f,
                                         Branch b) {
  const long n = sigma.rows();
  require_size(f, static_cast<std::size_t>(n), "odd_wigner_coefficients");
  const double sign = b == Branch::Plus ? -1.0 : 1.0;  // contravariant C^∓ = ∓C_∓
  return sign * f.odd.topLeftCorner(n, n).cast<cplx>().cwiseProduct(sigma).transpose();
}

WignerComponents assemble_wigner(const CoefficientMatrices& coeffs, const ChargeFactor& factors,
                                 const PhaseGrid& grid, bool include_odd) {
  coeffs.validate();
  require_size(factors, coeffs.size(), "assemble_wigner");
  WignerComponents w{grid, ComplexField(grid), ComplexField(grid), ComplexField(grid),
                     ComplexField(grid), coeffs.trace(), {}};
  if (std::abs(w.state_trace - 1.0) > 1e-10)
    w.warnings.push_back("state not normalised: trace = " + format_double(w.state_trace));
  auto fill = [&](const Eigen::MatrixXcd& m, ComplexField& out, const Eigen::MatrixXcd& c) {
    if (!is_zero(m)) out = synthesize(grid, c);
  };
  fill(coeffs.even_plus, w.even_plus, even_wigner_coefficients(coeffs.even_plus, factors));
  fill(coeffs.even_minus, w.even_minus, even_wigner_coefficients(coeffs.even_minus, factors));
  if (include_odd) {
    fill(coeffs.odd_plus, w.odd_plus, odd_wigner_coefficients(coeffs.odd_plus, factors, Branch::Plus));
    fill(coeffs.odd_minus, w.odd_minus,
         odd_wigner_coefficients(coeffs.odd_minus, factors, Branch::Minus));
  }
  return w;
}

WignerDiagnostics diagnose(const WignerComponents& w) {
  WignerDiagnostics d;
  d.even_imag = std::max(w.even_plus.max_abs_imag(), w.even_minus.max_abs_imag());
  d.conjugacy = (w.odd_plus - w.odd_minus.conj()).max_abs();
  d.even_integral = (w.even_plus.integral() + w.even_minus.integral()).real();
  d.odd_integral = std::max(std::abs(w.odd_plus.integral()), std::abs(w.odd_minus.integral()));
  d.min_even = (w.even_plus + w.even_minus).min_real();
  return d;
}

cplx basis_function(Axis axis, std::size_t n, double x) {
  std::vector<double> h(n + 1);
  hermite_functions(x, h);
  if (axis == Axis::Position) return h[n];
  static const cplx phase[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};  // (-i)^n
  return phase[n % 4] * h[n];
}

std::vector<double> distribution(const CoefficientMatrices& coeffs, const ChargeFactor& factors,
                                 Axis axis, std::span<const double> xs, Branch b) {
  const std::size_t n = coeffs.size();
  require_size(factors, n, "distribution");
  const Eigen::MatrixXcd w =
      factors.even.topLeftCorner(static_cast<long>(n), static_cast<long>(n)).cast<cplx>().cwiseProduct(
          coeffs.even(b));
  std::vector<double> out(xs.size());
  Eigen::VectorXcd phi(static_cast<long>(n));
  std::vector<double> h(n);
  static const cplx phase[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    hermite_functions(xs[i], h);
    for (std::size_t k = 0; k < n; ++k)
      phi(static_cast<long>(k)) = axis == Axis::Position ? cplx(h[k], 0.0) : phase[k % 4] * h[k];
    out[i] = (phi.adjoint() * w * phi)(0, 0).real();
  }
  return out;
}

Eigen::MatrixXcd power_matrix(Axis axis, unsigned k, std::size_t n_levels) {
  const long big = static_cast<long>(n_levels + k + 1);
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(big, big);  // annihilation operator
  for (long n = 1; n < big; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  const Eigen::MatrixXcd ad = a.adjoint();
  const Eigen::MatrixXcd x = axis == Axis::Position
                                 ? Eigen::MatrixXcd((a + ad) / std::numbers::sqrt2)
                                 : Eigen::MatrixXcd(cplx(0.0, 1.0) * (ad - a) / std::numbers::sqrt2);
  Eigen::MatrixXcd xk = Eigen::MatrixXcd::Identity(big, big);
  for (unsigned i = 0; i < k; ++i) xk = xk * x;
  return xk.topLeftCorner(static_cast<long>(n_levels), static_cast<long>(n_levels));
}

cplx mean_value(const CoefficientMatrices& coeffs, const ChargeFactor& factors,
                const Eigen::MatrixXcd& a, bool include_odd) {
  const long n = static_cast<long>(coeffs.size());
  require_size(factors, coeffs.size(), "mean_value");
  if (a.rows() != n || a.cols() != n)
    throw std::invalid_argument("mean_value: observable matrix must be N x N");
  const Eigen::MatrixXcd eps = factors.even.topLeftCorner(n, n).cast<cplx>();
  // Int A sum c(n,m) W_nm = sum c(n,m) <m|A|n> with c(n,m) = eps(m,n) rho(m,n)
  cplx total = eps.cwiseProduct(coeffs.even_plus + coeffs.even_minus).cwiseProduct(a).sum();
  if (include_odd) {
    const Eigen::MatrixXcd chi = factors.odd.topLeftCorner(n, n).cast<cplx>();
    total += chi.cwiseProduct(coeffs.odd_minus - coeffs.odd_plus).cwiseProduct(a).sum();
  }
  return total;
}

double moment(const CoefficientMatrices& coeffs, const ChargeFactor& factors, Axis axis,
              unsigned k) {
  if (k >= coeffs.size())
    throw std::invalid_argument("moment: power " + std::to_string(k) +
                                " not below the truncation N = " + std::to_string(coeffs.size()));
  return mean_value(coeffs, factors, power_matrix(axis, k, coeffs.size())).real();
}

double max_minor(const Eigen::MatrixXcd& b, const Mask* usable) {
  const long r = b.rows(), c = b.cols();
  auto ok = [&](long i, long j) { return !usable || (*usable)(i, j); };
  double worst = 0.0;
  for (long m = 0; m < r; ++m)
    for (long m2 = m + 1; m2 < r; ++m2)
      for (long n = 0; n < c; ++n) {
        if (!ok(m, n) || !ok(m2, n)) continue;
        for (long n2 = n + 1; n2 < c; ++n2) {
          if (!ok(m2, n2) || !ok(m, n2)) continue;
          worst = std::max(worst, std::abs(b(m, n) * b(m2, n2) - b(m, n2) * b(m2, n)));
        }
      }
  return worst;
}

PurityReport purity_from_wigner_coefficients(const Eigen::MatrixXcd& w_even_plus,
                                             const Eigen::MatrixXcd& w_even_minus,
                                             const Eigen::MatrixXcd& w_odd_plus,
                                             const ChargeFactor& factors, double tol) {
  const long n = w_even_plus.rows();
  require_size(factors, static_cast<std::size_t>(n), "purity_criterium");
  const Eigen::MatrixXd eps = factors.even.topLeftCorner(n, n);
  const Eigen::MatrixXd chi = factors.odd.topLeftCorner(n, n);
  PurityReport rep;
  rep.max_minor = std::max(max_minor(w_even_plus.cwiseQuotient(eps.cast<cplx>())),
                           max_minor(w_even_minus.cwiseQuotient(eps.cast<cplx>())));
  rep.is_pure = rep.max_minor < tol;
  Mask usable(n, n);
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(n, n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) {
      usable(i, j) = i != j && std::abs(chi(i, j)) > 1e-14;
      if (usable(i, j)) b(i, j) = w_odd_plus(i, j) / chi(i, j);
    }
  rep.odd_max_minor = max_minor(b, &usable);
  rep.odd_is_pure = rep.odd_max_minor < tol;
  return rep;
}

PurityReport purity_criterium(const CoefficientMatrices& coeffs, const ChargeFactor& factors,
                              double tol) {
  const long n = static_cast<long>(coeffs.size());
  require_size(factors, coeffs.size(), "purity_criterium");
  const Eigen::MatrixXcd eps = factors.even.topLeftCorner(n, n).cast<cplx>();
  const Eigen::MatrixXcd chi = factors.odd.topLeftCorner(n, n).cast<cplx>();
  return purity_from_wigner_coefficients(eps.cwiseProduct(coeffs.even_plus),
                                         eps.cwiseProduct(coeffs.even_minus),
                                         chi.cwiseProduct(coeffs.odd_plus), factors, tol);
}

double even_odd_constraint(const CoefficientMatrices& c) {
  if (is_zero(c.even_plus) || is_zero(c.even_minus)) return 0.0;
  const long n = static_cast<long>(c.size());
  double worst = 0.0;
  for (long m = 0; m < n; ++m)
    for (long k = 0; k < n; ++k)
      for (long m2 = 0; m2 < n; ++m2)
        for (long k2 = 0; k2 < n; ++k2)
          worst = std::max(worst, std::abs(c.even_plus(m, k) * c.even_minus(m2, k2) -
                                           c.odd_plus(m, k2) * c.odd_minus(m2, k)));
  return worst;
}

}  // namespace relwig
