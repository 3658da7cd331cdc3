#include "relwig/evolution.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "relwig/basis.hpp"
#include "relwig/fft.hpp"

namespace relwig {
namespace {

void require_levels(const EnergySpectrum& spectrum, std::size_t n, const char* what) {
  if (!spectrum.discrete() || spectrum.size() < n)
    throw std::invalid_argument(std::string(what) + ": spectrum must provide " + std::to_string(n) +
                                " discrete levels");
}

bool all_zero(const ComplexField& f) { return f.size() == 0 || f.max_abs() == 0.0; }

// Bracket evaluator for one Hamiltonian, FFT-cached or generic.
class Brackets {
 public:
  Brackets(const SymbolField& h, const EvolutionPlan& plan) : h_(h), backend_(plan.backend) {
    if (plan.backend.kind == StarBackend::Kind::IntegralFFT)
      op_.emplace(h, plan.backend.padding, plan.cache_hamiltonian);
  }
  ComplexField moyal(const ComplexField& w) const {
    return op_ ? op_->bracket(w) : moyal_bracket(h_, {w, h_.hbar}, backend_).field;
  }
  ComplexField anti(const ComplexField& w) const {
    return op_ ? op_->anti_bracket(w) : anti_moyal_bracket(h_, {w, h_.hbar}, backend_).field;
  }

 private:
  SymbolField h_;
  StarBackend backend_;
  std::optional<MoyalOperator> op_;
};

ComplexField rk4_step(const ComplexField& y, double h,
                      const std::function<ComplexField(const ComplexField&)>& f) {
  const ComplexField k1 = f(y);
  const ComplexField k2 = f(y + cplx(0.5 * h) * k1);
  const ComplexField k3 = f(y + cplx(0.5 * h) * k2);
  const ComplexField k4 = f(y + cplx(h) * k3);
  ComplexField out = y;
  out += cplx(h / 6.0) * (k1 + cplx(2.0) * k2 + cplx(2.0) * k3 + k4);
  return out;
}

}  // namespace

CoefficientMatrices evolve_spectral(const CoefficientMatrices& coeffs,
                                    const EnergySpectrum& spectrum, double t) {
  const std::size_t n = coeffs.size();
  require_levels(spectrum, n, "evolve_spectral");
  CoefficientMatrices out = coeffs;
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t k = 0; k < n; ++k) {
      const double em = spectrum.level(m), ek = spectrum.level(k);
      const auto i = static_cast<long>(m), j = static_cast<long>(k);
      const cplx even = std::polar(1.0, -(ek - em) * t);
      const cplx odd = std::polar(1.0, (em + ek) * t);
      out.even_plus(i, j) *= even;
      out.even_minus(i, j) *= std::conj(even);
      out.odd_plus(i, j) *= odd;
      out.odd_minus(i, j) *= std::conj(odd);
    }
  return out;
}

void EvolutionPlan::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("evolution plan: dt must be > 0");
  if (!(t_final >= 0.0) || !std::isfinite(t_final))
    throw std::invalid_argument("evolution plan: t_final must be >= 0");
  backend.validate();
}

std::size_t EvolutionPlan::steps() const {
  if (t_final == 0.0) return 0;
  return static_cast<std::size_t>(std::ceil(t_final / dt - 1e-9));
}

GridEvolution evolve_grid(const WignerComponents& w0, const SymbolField& hamiltonian,
                          const EvolutionPlan& plan, const StepObserver& observer) {
  plan.validate();
  for (const auto* f : {&w0.even_plus, &w0.even_minus, &w0.odd_plus, &w0.odd_minus})
    require_same_grid(hamiltonian.field, *f, "evolve_grid");
  require_finite(hamiltonian.field, "evolve_grid (Hamiltonian)");
  for (const auto* f : {&w0.even_plus, &w0.even_minus, &w0.odd_plus, &w0.odd_minus})
    require_finite(*f, "evolve_grid (initial state)");

  GridEvolution res{w0, {}};
  EvolutionDiagnostics& d = res.diag;
  d.steps = plan.steps();
  d.step = d.steps ? plan.t_final / static_cast<double>(d.steps) : 0.0;
  d.max_abs_energy = hamiltonian.field.max_abs();
  if (plan.dt * d.max_abs_energy >= 0.5)
    throw std::runtime_error("evolve_grid: stability guard dt * max|E| = " +
                             format_double(plan.dt * d.max_abs_energy) +
                             " >= 0.5; use dt < " + format_double(0.5 / d.max_abs_energy));

  const Brackets br(hamiltonian, plan);
  const double norm0 = (w0.even_plus.integral() + w0.even_minus.integral()).real();
  d.max_even_imag = std::max(w0.even_plus.max_abs_imag(), w0.even_minus.max_abs_imag());

  struct Part {
    ComplexField* field;
    std::function<ComplexField(const ComplexField&)> rhs;
    bool active;
  };
  WignerComponents& w = res.w;
  const cplx minus_one(-1.0, 0.0);
  Part parts[] = {
      {&w.even_plus, [&](const ComplexField& x) { return br.moyal(x); }, !all_zero(w.even_plus)},
      {&w.even_minus, [&](const ComplexField& x) { return minus_one * br.moyal(x); },
       !all_zero(w.even_minus)},
      {&w.odd_plus, [&](const ComplexField& x) { return minus_one * br.anti(x); },
       !all_zero(w.odd_plus)},
      {&w.odd_minus, [&](const ComplexField& x) { return br.anti(x); }, !all_zero(w.odd_minus)},
  };
  if (observer) observer(0, 0.0, w);
  for (std::size_t s = 1; s <= d.steps; ++s) {
    for (auto& part : parts) {
      if (!part.active) continue;
      *part.field = rk4_step(*part.field, d.step, part.rhs);
      if (!part.field->all_finite())
        throw std::runtime_error("evolve_grid: non-finite field after step " + std::to_string(s));
    }
    const double nrm = (w.even_plus.integral() + w.even_minus.integral()).real();
    d.even_norm_drift = std::max(d.even_norm_drift, std::abs(nrm - norm0));
    d.max_even_imag =
        std::max({d.max_even_imag, w.even_plus.max_abs_imag(), w.even_minus.max_abs_imag()});
    if (observer) observer(s, d.step * static_cast<double>(s), w);
  }
  return res;
}

HeisenbergResult heisenberg_symbol(const SymbolField& a, const EnergySpectrum& spectrum,
                                   Parity parity, Branch branch, double t, std::size_t n_levels,
                                   double max_tail) {
  require_levels(spectrum, n_levels, "heisenberg_symbol");
  const Projection proj = project_with_tail(a.field, n_levels);
  if (proj.tail > max_tail)
    throw std::runtime_error("heisenberg_symbol: projection tail " + format_double(proj.tail) +
                             " exceeds " + format_double(max_tail) +
                             "; increase N or use a decaying symbol");
  // coefficient of W_nm in A = 2 pi sum a_nm W_nm
  Eigen::MatrixXcd c = proj.coeffs * (2.0 * std::numbers::pi);
  const double sign = branch == Branch::Plus ? 1.0 : -1.0;
  for (long n = 0; n < c.rows(); ++n)
    for (long m = 0; m < c.cols(); ++m) {
      const double en = spectrum.level(static_cast<std::size_t>(n));
      const double em = spectrum.level(static_cast<std::size_t>(m));
      const double w = parity == Parity::Even ? en - em : em + en;
      c(n, m) *= std::polar(1.0, sign * w * t);
    }
  return {{synthesize(a.grid(), c), a.hbar}, proj.tail};
}

std::vector<double> means_timeseries(const CoefficientMatrices& coeffs, const ChargeFactor& factors,
                                     const EnergySpectrum& spectrum, Axis axis, unsigned k,
                                     std::span<const double> times) {
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(moment(evolve_spectral(coeffs, spectrum, t), factors, axis, k));
  return out;
}

FrequencyEstimate dominant_frequency(std::span<const double> series, double dt) {
  const std::size_t n = series.size();
  if (n < 4) throw std::invalid_argument("dominant_frequency: need at least 4 samples");
  if (!(dt > 0.0)) throw std::invalid_argument("dominant_frequency: dt must be > 0");
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(n);
  std::vector<cplx> in(n), out(n);
  for (std::size_t i = 0; i < n; ++i) in[i] = series[i] - mean;
  Fft(n, Fft::Direction::Forward).execute(in.data(), out.data());
  std::size_t best = 1;
  for (std::size_t k = 1; k <= n / 2; ++k)
    if (std::abs(out[k]) > std::abs(out[best])) best = k;
  FrequencyEstimate est;
  est.bin_width = 2.0 * std::numbers::pi / (static_cast<double>(n) * dt);
  est.omega = static_cast<double>(best) * est.bin_width;
  est.amplitude = std::abs(out[best]) / static_cast<double>(n);
  return est;
}

}  // namespace relwig
