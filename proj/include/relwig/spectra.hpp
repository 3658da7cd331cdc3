#pragma once

// Energy spectra of the square-root Hamiltonian and the charge (epsilon/chi)
// factors built from them.
//
// Internal units: hbar = m = c = 1. Energies are in mc^2, momenta in mc,
// times in hbar/mc^2. Rotator phase-space variables are dimensionless.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace relwig {

/// Physical constants used when converting out of internal units.
namespace si {
inline constexpr double hbar_ev_s = 6.582119569e-16;  // eV s
}

enum class SpectrumKind { FreeParticle, Rotator, Tabulated };

const char* to_string(SpectrumKind kind);

/// Eigenvalue moduli E(n) of the Hamiltonian (discrete kinds) or the free
/// dispersion E(p) = sqrt(1 + p^2) (FreeParticle).
///
/// Rotator: E(n) = sqrt(1 + 2 lambda^2 (n + 1/2)), lambda^2 = hbar omega_c / mc^2.
/// Tabulated: caller-provided levels, used for synthetic/degenerate spectra.
class EnergySpectrum {
 public:
  static EnergySpectrum rotator(double lambda, std::size_t levels);
  static EnergySpectrum free_particle();
  static EnergySpectrum tabulated(std::vector<double> levels);

  SpectrumKind kind() const { return kind_; }
  double lambda() const { return lambda_; }
  bool discrete() const { return kind_ != SpectrumKind::FreeParticle; }

  /// Number of tabulated levels (0 for the free particle).
  std::size_t size() const { return levels_.size(); }
  std::span<const double> levels() const { return levels_; }

  /// E(n); throws std::out_of_range past the table.
  double level(std::size_t n) const;
  /// E(p) for the free particle; throws std::logic_error for discrete kinds.
  double energy(double p) const;

  nlohmann::ordered_json to_json() const;
  static EnergySpectrum from_json(const nlohmann::json& j);

 private:
  EnergySpectrum(SpectrumKind kind, double lambda, std::vector<double> levels);

  SpectrumKind kind_;
  double lambda_;
  std::vector<double> levels_;
};

inline constexpr std::size_t default_truncation = 64;

EnergySpectrum rotator_spectrum(double lambda, std::size_t levels = default_truncation);

/// sqrt(1 + p^2), p in mc.
double free_dispersion(double p);

/// epsilon(m,n) = (E_m + E_n) / (2 sqrt(E_m E_n)), chi(m,n) = (E_m - E_n) / (2 sqrt(E_m E_n)).
struct ChargeFactor {
  Eigen::MatrixXd even;  // epsilon
  Eigen::MatrixXd odd;   // chi
  std::size_t size() const { return static_cast<std::size_t>(even.rows()); }
};

ChargeFactor charge_factors(const EnergySpectrum& spectrum, std::size_t n);

/// epsilon = 1, chi = 0: the nonlocal-theory baseline.
ChargeFactor nonlocal_factors(std::size_t n);

double epsilon_pair(double e1, double e2);
double chi_pair(double e1, double e2);

/// epsilon factor of the free particle at momenta p1, p2 (mc units).
double epsilon_continuous(double p1, double p2);

/// omega_mn = (E(m) - E(n)) / hbar, in mc^2/hbar.
double interference_frequency(const EnergySpectrum& spectrum, std::size_t m, std::size_t n);

/// Compton time hbar / mc^2 in seconds for a rest energy given in eV.
double compton_time(double rest_energy_ev);

}  // namespace relwig
