#include "relwig/spectra.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace relwig {

const char* to_string(SpectrumKind kind) {
  switch (kind) {
    case SpectrumKind::FreeParticle: return "FreeParticle";
    case SpectrumKind::Rotator: return "Rotator";
    case SpectrumKind::Tabulated: return "Tabulated";
  }
  return "?";
}

EnergySpectrum::EnergySpectrum(SpectrumKind kind, double lambda, std::vector<double> levels)
    : kind_(kind), lambda_(lambda), levels_(std::move(levels)) {}

EnergySpectrum EnergySpectrum::rotator(double lambda, std::size_t levels) {
  if (!std::isfinite(lambda) || lambda < 0.0)
    throw std::invalid_argument("rotator spectrum: lambda must be finite and >= 0");
  if (levels == 0) throw std::invalid_argument("rotator spectrum: level count must be >= 1");
  std::vector<double> e(levels);
  const double l2 = lambda * lambda;
  for (std::size_t n = 0; n < levels; ++n)
    e[n] = std::sqrt(1.0 + 2.0 * l2 * (static_cast<double>(n) + 0.5));
  return EnergySpectrum(SpectrumKind::Rotator, lambda, std::move(e));
}

EnergySpectrum EnergySpectrum::free_particle() {
  return EnergySpectrum(SpectrumKind::FreeParticle, 0.0, {});
}

EnergySpectrum EnergySpectrum::tabulated(std::vector<double> levels) {
  if (levels.empty()) throw std::invalid_argument("tabulated spectrum: no levels");
  for (double e : levels)
    if (!std::isfinite(e) || e < 1.0)
      throw std::invalid_argument("tabulated spectrum: every level must be finite and >= mc^2");
  return EnergySpectrum(SpectrumKind::Tabulated, 0.0, std::move(levels));
}

double EnergySpectrum::level(std::size_t n) const {
  if (n >= levels_.size())
    throw std::out_of_range("energy level " + std::to_string(n) + " beyond spectrum of size " +
                            std::to_string(levels_.size()));
  return levels_[n];
}

double EnergySpectrum::energy(double p) const {
  if (kind_ != SpectrumKind::FreeParticle)
    throw std::logic_error("energy(p) is only defined for the free particle");
  return free_dispersion(p);
}

nlohmann::ordered_json EnergySpectrum::to_json() const {
  nlohmann::ordered_json j;
  j["kind"] = to_string(kind_);
  j["lambda"] = lambda_;
  j["levels"] = levels_;
  return j;
}

EnergySpectrum EnergySpectrum::from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "FreeParticle") return free_particle();
  if (kind == "Rotator") {
    const auto levels = j.at("levels").get<std::vector<double>>();
    return rotator(j.at("lambda").get<double>(), levels.size());
  }
  if (kind == "Tabulated") return tabulated(j.at("levels").get<std::vector<double>>());
  throw std::invalid_argument("unknown spectrum kind '" + kind + "'");
}

EnergySpectrum rotator_spectrum(double lambda, std::size_t levels) {
  return EnergySpectrum::rotator(lambda, levels);
}

double free_dispersion(double p) { return std::sqrt(1.0 + p * p); }

double epsilon_pair(double e1, double e2) { return (e1 + e2) / (2.0 * std::sqrt(e1 * e2)); }

double chi_pair(double e1, double e2) { return (e1 - e2) / (2.0 * std::sqrt(e1 * e2)); }

ChargeFactor charge_factors(const EnergySpectrum& spectrum, std::size_t n) {
  if (!spectrum.discrete())
    throw std::invalid_argument("charge_factors needs a discrete spectrum");
  if (n > spectrum.size())
    throw std::invalid_argument("charge_factors: requested size " + std::to_string(n) +
                                " exceeds the " + std::to_string(spectrum.size()) +
                                " available levels");
  const auto N = static_cast<Eigen::Index>(n);
  ChargeFactor f{Eigen::MatrixXd(N, N), Eigen::MatrixXd(N, N)};
  const auto e = spectrum.levels();
  for (Eigen::Index m = 0; m < N; ++m) {
    f.even(m, m) = 1.0;
    f.odd(m, m) = 0.0;
    for (Eigen::Index k = m + 1; k < N; ++k) {
      const double em = e[static_cast<std::size_t>(m)];
      const double ek = e[static_cast<std::size_t>(k)];
      f.even(m, k) = f.even(k, m) = epsilon_pair(em, ek);
      f.odd(m, k) = chi_pair(em, ek);
      f.odd(k, m) = -f.odd(m, k);
    }
  }
  return f;
}

ChargeFactor nonlocal_factors(std::size_t n) {
  const auto N = static_cast<Eigen::Index>(n);
  return {Eigen::MatrixXd::Ones(N, N), Eigen::MatrixXd::Zero(N, N)};
}

double epsilon_continuous(double p1, double p2) {
  return epsilon_pair(free_dispersion(p1), free_dispersion(p2));
}

double interference_frequency(const EnergySpectrum& spectrum, std::size_t m, std::size_t n) {
  return spectrum.level(m) - spectrum.level(n);
}

double compton_time(double rest_energy_ev) {
  if (!(rest_energy_ev > 0.0) || !std::isfinite(rest_energy_ev))
    throw std::invalid_argument("compton_time: rest energy must be positive");
  return si::hbar_ev_s / rest_energy_ev;
}

}  // namespace relwig
