#pragma once

// Time evolution (t in hbar/mc^2): exact spectral phases on coefficient
// matrices, RK4 on grid fields via Moyal brackets, Heisenberg-picture symbols.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "relwig/spectra.hpp"
#include "relwig/star.hpp"
#include "relwig/state.hpp"

namespace relwig {

/// even ±: (m,n) * exp(∓i(E(n)-E(m))t); odd ±: (m,n) * exp(±i(E(m)+E(n))t).
CoefficientMatrices evolve_spectral(const CoefficientMatrices& coeffs,
                                    const EnergySpectrum& spectrum, double t);

struct EvolutionPlan {
  enum class Method { Spectral, GridRK4 };
  Method method = Method::GridRK4;
  double dt = 1e-3;
  double t_final = 0.0;
  StarBackend backend = StarBackend::fft();
  /// Keep the Hamiltonian's shifted spectral rows (IntegralFFT only).
  bool cache_hamiltonian = true;

  void validate() const;
  /// Steps actually taken: ceil(t_final / dt), each of length t_final / steps.
  std::size_t steps() const;
};

struct EvolutionDiagnostics {
  std::size_t steps = 0;
  double step = 0.0;
  double max_abs_energy = 0.0;
  double even_norm_drift = 0.0;  // max_t |Int W_[+] + W_[-] (t) - (t=0)|
  double max_even_imag = 0.0;    // max_t max |Im W_[±]|
};

struct GridEvolution {
  WignerComponents w;
  EvolutionDiagnostics diag;
};

using StepObserver = std::function<void(std::size_t step, double t, const WignerComponents&)>;

/// d_t W_[±] = ±{E, W_[±]}_M, d_t W_{±} = ∓[E, W_{±}]_M by classical RK4.
/// Identically zero components are skipped (the equations are linear).
/// Throws std::runtime_error on the stability guard dt max|E| >= 0.5 and on
/// non-finite fields (naming the step).
GridEvolution evolve_grid(const WignerComponents& w, const SymbolField& hamiltonian,
                          const EvolutionPlan& plan, const StepObserver& observer = {});

enum class Parity { Even, Odd };

struct HeisenbergResult {
  SymbolField symbol;
  double tail = 0.0;  // relative L2 not captured by the N x N projection
};

/// Projects a onto W_nm (n,m < n_levels), multiplies coefficient (n,m) by
/// exp(±i(E(n)-E(m))t) (Even) or exp(±i(E(m)+E(n))t) (Odd), + for the Plus branch,
/// and resynthesises. Throws std::runtime_error when tail > max_tail.
HeisenbergResult heisenberg_symbol(const SymbolField& a, const EnergySpectrum& spectrum,
                                   Parity parity, Branch branch, double t, std::size_t n_levels,
                                   double max_tail = 1e-6);

/// Even-part mean of x^k at each time, via evolve_spectral + moment.
std::vector<double> means_timeseries(const CoefficientMatrices& coeffs, const ChargeFactor& factors,
                                     const EnergySpectrum& spectrum, Axis axis, unsigned k,
                                     std::span<const double> times);

struct FrequencyEstimate {
  double omega = 0.0;      // angular frequency of the strongest non-DC bin
  double bin_width = 0.0;  // 2 pi / (n dt)
  double amplitude = 0.0;  // |X_k| / n
};

/// Peak of the periodogram of a uniformly sampled series (mean removed).
FrequencyEstimate dominant_frequency(std::span<const double> series, double dt);

}  // namespace relwig
