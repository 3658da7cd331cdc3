#include "relwig/hamiltonian.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "relwig/kernels.hpp"

namespace relwig {

SeriesControl HamiltonianOptions::control() const {
  SeriesControl c;
  c.max_terms = max_terms;
  c.tolerance = tolerance;
  c.cesaro_order = cesaro_order;
  return c;
}

SeriesEstimate rotator_hamiltonian_value(double lambda, double r2, const HamiltonianOptions& opts) {
  if (!std::isfinite(lambda) || lambda < 0.0)
    throw std::invalid_argument("rotator Hamiltonian: lambda must be finite and >= 0");
  if (!(r2 >= 0.0)) throw std::invalid_argument("rotator Hamiltonian: r^2 must be >= 0");
  return kernels::rotator_symbol_at(lambda, r2, opts.accel, opts.control());
}

HamiltonianSymbol rotator_hamiltonian_symbol(double lambda, const PhaseGrid& grid,
                                             const HamiltonianOptions& opts) {
  if (!std::isfinite(lambda) || lambda < 0.0)
    throw std::invalid_argument("rotator Hamiltonian: lambda must be finite and >= 0");
  if (opts.max_terms < 8) throw std::invalid_argument("rotator Hamiltonian: N must be >= 8");
  if (grid.units != UnitsTag::RotatorDimensionless)
    throw std::invalid_argument("rotator Hamiltonian: grid must be in rotator units");
  const bool tapered = opts.taper_outer > 0.0;
  if (tapered && !(opts.taper_inner >= 0.0 && opts.taper_inner < opts.taper_outer))
    throw std::invalid_argument("rotator Hamiltonian: need 0 <= taper_inner < taper_outer");

  // Bucket radii so symmetric grid points share one sum (and one value).
  std::map<long long, std::size_t> bucket;
  std::vector<double> radii;
  std::vector<std::size_t> slot(grid.size(), 0);
  const double cutoff = tapered ? opts.taper_outer * opts.taper_outer : INFINITY;
  for (std::size_t ip = 0; ip < grid.np; ++ip)
    for (std::size_t iq = 0; iq < grid.nq; ++iq) {
      double r2 = grid.p(ip) * grid.p(ip) + grid.q(iq) * grid.q(iq);
      if (r2 >= cutoff) r2 = cutoff;
      const long long key = std::llround(r2 * 1e9);
      auto [it, fresh] = bucket.emplace(key, radii.size());
      if (fresh) radii.push_back(r2);
      slot[grid.index(ip, iq)] = it->second;
    }
  if (tapered && bucket.emplace(std::llround(cutoff * 1e9), radii.size()).second)
    radii.push_back(cutoff);

  const auto est = kernels::omp::rotator_symbol_radii(lambda, radii, opts.accel, opts.control());

  HamiltonianSymbol out{{ComplexField(grid), 1.0}, {}};
  HamiltonianReport& rep = out.report;
  rep.unique_radii = radii.size();
  for (std::size_t i = 0; i < est.size(); ++i) {
    rep.max_terms_used = std::max(rep.max_terms_used, est[i].terms_used);
    if (!est[i].converged) {
      ++rep.failures;
      rep.converged = false;
    }
  }
  double worst = -1.0;
  for (std::size_t ip = 0; ip < grid.np; ++ip)
    for (std::size_t iq = 0; iq < grid.nq; ++iq) {
      const auto& e = est[slot[grid.index(ip, iq)]];
      out.symbol.field.at(ip, iq) = e.value;
      const double badness = e.converged ? e.last_delta : INFINITY;
      if (badness > worst) {
        worst = badness;
        rep.worst_delta = e.last_delta;
        rep.worst_p = grid.p(ip);
        rep.worst_q = grid.q(iq);
      }
    }
  if (tapered) {
    const double far = est[bucket.at(std::llround(cutoff * 1e9))].value;
    out.symbol.field = taper_far_field(out.symbol.field, opts.taper_inner, opts.taper_outer, far);
  }
  return out;
}

double expansion_hamiltonian_value(double lambda, double r2, unsigned order) {
  if (order > 3) throw std::invalid_argument("expansion_hamiltonian: order must be 0..3");
  const double l2 = lambda * lambda, l4 = l2 * l2;
  double braces = l2 / 8.0;
  if (order >= 1) braces += 0.5 * r2 * (1.0 - 5.0 * l4 / 8.0);
  if (order >= 2) braces -= l2 / 8.0 * r2 * r2;
  if (order >= 3) braces += l4 / 16.0 * r2 * r2 * r2;
  return 1.0 + l2 * braces;
}

SymbolField expansion_hamiltonian(double lambda, const PhaseGrid& grid, unsigned order) {
  if (order > 3) throw std::invalid_argument("expansion_hamiltonian: order must be 0..3");
  return {ComplexField::sample(grid,
                               [&](double p, double q) {
                                 return cplx(expansion_hamiltonian_value(lambda, p * p + q * q, order),
                                             0.0);
                               }),
          1.0};
}

double smooth_step(double t) {
  if (t <= 0.0) return 1.0;
  if (t >= 1.0) return 0.0;
  const double a = std::exp(-1.0 / (1.0 - t)), b = std::exp(-1.0 / t);
  return a / (a + b);
}

ComplexField taper_far_field(const ComplexField& f, double inner, double outer, cplx far) {
  if (!(inner >= 0.0 && inner < outer))
    throw std::invalid_argument("taper_far_field: need 0 <= inner < outer");
  ComplexField out = f;
  const PhaseGrid& g = f.grid();
  for (std::size_t ip = 0; ip < g.np; ++ip)
    for (std::size_t iq = 0; iq < g.nq; ++iq) {
      const double w = smooth_step((std::hypot(g.p(ip), g.q(iq)) - inner) / (outer - inner));
      out.at(ip, iq) = w * f.at(ip, iq) + (1.0 - w) * far;
    }
  return out;
}

}  // namespace relwig
