// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "relwig/basis.hpp"
#include "relwig/config.hpp"
#include "relwig/evolution.hpp"
#include "relwig/figures.hpp"
#include "relwig/hamiltonian.hpp"
#include "relwig/spectra.hpp"
#include "relwig/star.hpp"
#include "relwig/state.hpp"

using namespace relwig;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

class Checks {
 public:
  void bound(const std::string& name, double value, double limit) {
    add(name, value < limit, name + "=" + sci(value) + " (<" + sci(limit) + ")");
  }
  void near(const std::string& name, double value, double target, double tol) {
    add(name, std::abs(value - target) <= tol,
        name + "=" + fixed(value) + " (target " + fixed(target) + " +/- " + sci(tol) + ")");
  }
  void add(const std::string& name, bool ok, const std::string& detail) {
    ok_ = ok_ && ok;
    if (!ok) failed_.push_back(name);
    details_ += (details_.empty() ? "" : "; ") + detail;
  }
  bool ok() const { return ok_; }
  const std::string& details() const { return details_; }
  const std::vector<std::string>& failed() const { return failed_; }

  static std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
  }
  static std::string fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
  }

 private:
  bool ok_ = true;
  std::string details_;
  std::vector<std::string> failed_;
};

struct Criterion {
  int id;
  const char* title;
  double budget_s;
  std::function<void(Checks&)> body;
};

ChargeStateVector sup02(std::size_t n) { return ChargeStateVector::superposition(n, {{0, 1.0}, {2, 1.0}}); }

SymbolField gaussian(const PhaseGrid& g, double p0, double q0, double s, cplx amp, double hbar = 1.0) {
  return {ComplexField::sample(g,
                               [&](double p, double q) {
                                 const double r2 = (p - p0) * (p - p0) + (q - q0) * (q - q0);
                                 return amp * std::exp(-r2 / (2 * s * s));
                               }),
          hbar};
}

void epsilon_table(Checks& c) {
  const std::size_t n = 64;
  const double lambda = 10.0;
  const auto f = charge_factors(rotator_spectrum(lambda, n), n);
  double diag = 0.0, asym = 0.0, hyper = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double e = f.even(i, j), x = f.odd(i, j);
      if (i == j) diag = std::max(diag, std::abs(e - 1.0));
      asym = std::max(asym, std::abs(e - f.even(j, i)));
      hyper = std::max(hyper, std::abs(e * e - x * x - 1.0));
    }
  c.add("eps(n,n)", diag == 0.0, "max|eps(n,n)-1|=" + Checks::sci(diag) + " (exact)");
  c.add("symmetry", asym == 0.0, "max|eps-eps^T|=" + Checks::sci(asym) + " (exact)");
  c.bound("eps^2-chi^2-1", hyper, 1e-12);

  // direct evaluation, independent of the table code
  const double e0 = std::sqrt(1.0 + 2.0 * lambda * lambda * 0.5);
  const double e2 = std::sqrt(1.0 + 2.0 * lambda * lambda * 2.5);
  const double direct = (e0 + e2) / (2.0 * std::sqrt(e0 * e2));
  c.bound("|eps(0,2)-direct|", std::abs(f.even(0, 2) - direct), 1e-14);
  c.near("eps(0,2)", f.even(0, 2), 1.081216, 1e-6);
}

void wigner_basis(Checks& c) {
  const auto g = PhaseGrid::square(6.0, 256);
  const std::size_t levels = 7, count = levels * levels;
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(g.size()), static_cast<Eigen::Index>(count));
  double trace = 0.0;
  for (std::size_t n = 0; n < levels; ++n)
    for (std::size_t k = 0; k < levels; ++k) {
      const auto w = wigner_basis_element(n, k, g).field;
      const auto col = static_cast<Eigen::Index>(n * levels + k);
      for (std::size_t i = 0; i < g.size(); ++i) m(static_cast<Eigen::Index>(i), col) = w.values()[i];
      trace = std::max(trace, std::abs(w.integral() - cplx(n == k ? 1.0 : 0.0)));
    }
  const Eigen::MatrixXcd gram = two_pi * g.cell_area() * (m.adjoint() * m);
  const double ortho = (gram - Eigen::MatrixXcd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  c.bound("orthonormality", ortho, 1e-6);
  c.bound("trace", trace, 1e-8);
}

void star_algebra(Checks& c) {
  {
    const auto g = PhaseGrid::square(6.0, 64);
    double worst = 0.0;
    for (double hbar : {1.0, 0.5}) {
      const SymbolField q{ComplexField::sample(g, [](double, double x) { return cplx(x); }), hbar};
      const SymbolField p{ComplexField::sample(g, [](double x, double) { return cplx(x); }), hbar};
      const auto qp = star(q, p, StarBackend::series(2));
      const auto ref = ComplexField::sample(g, [&](double pp, double qq) { return cplx(qq * pp, hbar / 2); });
      worst = std::max(worst, (qp.field - ref).max_abs());
    }
    c.bound("q*p-(qp+i hbar/2)", worst, 1e-10);
  }
  {
    const auto g = PhaseGrid::square(8.0, 128);
    std::mt19937 rng(20240611);
    std::uniform_real_distribution<double> centre(-1.5, 1.5), width(0.8, 1.5), phase(-1.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
      const auto a = gaussian(g, centre(rng), centre(rng), width(rng), {1.0, phase(rng)});
      const auto b = gaussian(g, centre(rng), centre(rng), width(rng), {phase(rng), 1.0});
      const auto d = gaussian(g, centre(rng), centre(rng), width(rng), {1.0, 0.0});
      worst = std::max(worst, relative_l2(star(star(a, b), d).field, star(a, star(b, d)).field));
    }
    c.bound("associativity", worst, 1e-6);
  }
  {
    const auto g = PhaseGrid::square(8.0, 128);
    std::vector<double> err;
    for (double hbar : {1.0, 0.5, 0.25}) {
      const auto a = gaussian(g, 0.4, -0.3, 1.0, {1.0, 0.0}, hbar);
      const auto b = gaussian(g, -0.5, 0.6, 1.2, {1.0, 0.0}, hbar);
      err.push_back(relative_l2(moyal_bracket(a, b).field, poisson_bracket(a.field, b.field)));
    }
    for (std::size_t k = 1; k < err.size(); ++k)
      c.near("order(" + std::to_string(k) + ")", std::log2(err[k - 1] / err[k]), 2.0, 0.2);
  }
}

void star_square_root(Checks& c) {
  double worst = 0.0;
  bool converged = true;
  for (int k = 0; k <= 20; ++k) {
    const double r2 = k / 20.0;
    const auto v = rotator_hamiltonian_value(0.1, r2);
    converged = converged && v.converged;
    const double ref = expansion_hamiltonian_value(0.1, r2, 3);
    worst = std::max(worst, std::abs(v.value - ref) / ref);
  }
  c.add("sum converged", converged, converged ? "sum converged" : "sum did not converge");
  c.bound("expansion rel", worst, 1e-5);

  const double lambda = 0.3;
  const auto g = PhaseGrid::square(10.0, 128);
  HamiltonianOptions opts;
  opts.taper_inner = 6.0;
  opts.taper_outer = 9.0;
  const auto e = rotator_hamiltonian_symbol(lambda, g, opts);
  c.add("symbol converged", e.report.converged, e.report.converged ? "symbol converged" : "symbol not converged");
  const auto spec = rotator_spectrum(lambda, 8);
  double res = 0.0;
  for (std::size_t n = 0; n <= 4; ++n) {
    const SymbolField w{diagonal_wigner(n, g), 1.0};
    res = std::max(res, l2_distance(star(e.symbol, w).field, spec.level(n) * w.field) / w.field.l2_norm());
  }
  c.bound("star-eigen residual", res, 1e-4);
}

void figure2(Checks& c) {
  const auto panels = fig2_panels(10.0, fig2_default_grid());
  const bool generated = panels.mixed.all_finite() && panels.nonlocal.all_finite() && panels.standard.all_finite() &&
                         panels.mixed.size() > 0;
  c.add("panels", generated, generated ? "3 panels finite" : "panel missing or non-finite");
  c.bound("mixed rotation", panels.mixed_rotation, 1e-8);
  const double eps02 = charge_factors(rotator_spectrum(10.0, 3), 3).even(0, 2);
  c.bound("|ratio-eps(0,2)|", std::abs(panels.amplitude_ratio - eps02), 1e-6);
  c.bound("normalisation",
          std::max({panels.normalization[0], panels.normalization[1], panels.normalization[2]}), 1e-6);
}

void figure3(Checks& c) {
  const auto f = fig3_fields(8.0, 0.0, fig3_default_grid());
  c.bound("max|Im W|", f.max_imag, 1e-10);
  c.bound("min W", f.min_epsilon, 0.0);
  const auto narrow = PhaseGrid::make(-0.08, 0.08, -500.0, 500.0, 256, 256, UnitsTag::FreeParticle);
  const auto n = fig3_fields(0.01, 0.0, narrow);
  c.bound("eps vs unit (dp=0.01)", relative_l2(n.epsilon, n.unit), 1e-4);
}

void evolution(Checks& c) {
  const double lambda = 0.3, t_final = 0.2;
  const auto g = PhaseGrid::square(10.0, 96);
  const auto spec = rotator_spectrum(lambda, 3);
  const auto f = charge_factors(spec, 3);
  const auto coeffs = CoefficientMatrices::from_state(sup02(3));
  const auto w0 = assemble_wigner(coeffs, f, g);
  EvolutionPlan plan;
  plan.dt = 1e-3;
  plan.t_final = t_final;
  const auto r = evolve_grid(w0, tapered_rotator_hamiltonian(lambda, g), plan);
  const auto ref = assemble_wigner(evolve_spectral(coeffs, spec, t_final), f, g);
  c.bound("rk4 vs spectral", relative_l2(r.w.total(), ref.total()), 1e-4);
  c.bound("even norm drift", r.diag.even_norm_drift, 1e-6);

  // the interference period (~39) is far longer than t_final; take <q^2>(t) over many periods
  const double dt = 0.1;
  std::vector<double> times(4096);
  for (std::size_t k = 0; k < times.size(); ++k) times[k] = static_cast<double>(k) * dt;
  const auto est = dominant_frequency(means_timeseries(coeffs, f, spec, Axis::Position, 2, times), dt);
  const double omega = spec.level(2) - spec.level(0);
  c.add("frequency", std::abs(est.omega - omega) <= est.bin_width,
        "omega=" + Checks::fixed(est.omega) + " (E2-E0 " + Checks::fixed(omega) + ", bin " +
            Checks::sci(est.bin_width) + ")");
}

ChargeStateVector two_branch(std::size_t n) {
  ChargeStateVector s{Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n)),
                      Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n))};
  s.plus(0) = cplx(0.6, 0.0);
  s.plus(2) = cplx(0.3, 0.4);
  s.minus(1) = cplx(0.2, -0.3);
  s.minus(2) = cplx(std::sqrt(1.0 - 0.36 - 0.25 - 0.13), 0.0);
  return s;
}

void constraints(Checks& c) {
  const std::size_t n = 4;
  const auto f = charge_factors(rotator_spectrum(10.0, n), n);
  double pure = 0.0;
  for (const auto& s : {ChargeStateVector::eigenstate(n, 1), sup02(n), two_branch(n)}) {
    const auto r = purity_criterium(CoefficientMatrices::from_state(s), f);
    pure = std::max({pure, r.max_minor, r.odd_max_minor});
  }
  c.bound("pure minors", pure, 1e-12);

  const auto mix = CoefficientMatrices::mixture(
      {{0.5, ChargeStateVector::eigenstate(n, 0)}, {0.5, ChargeStateVector::eigenstate(n, 2)}});
  c.near("mixture minor", purity_criterium(mix, f).max_minor, 0.25, 1e-12);

  const auto tb = CoefficientMatrices::from_state(two_branch(n));
  c.bound("even-odd", even_odd_constraint(tb), 1e-12);

  const auto d = diagnose(assemble_wigner(tb, f, PhaseGrid::square(6.0, 64)));
  c.bound("reality", d.even_imag, 1e-10);
  c.bound("conjugacy", d.conjugacy, 1e-10);
  c.bound("matrix structure", tb.structure_residual(), 1e-10);
}

void compton(Checks& c) {
  const auto cfg = Config::load(RELWIG_MASSES_CONFIG);
  for (const auto& [key, expected] : {std::pair<const char*, const char*>{"mass_pi_ev", "4.7e-24"},
                                      {"mass_electron_ev", "1.3e-21"}}) {
    const auto mass = cfg.get_double(key);
    if (!mass) {
      c.add(key, false, std::string(key) + " missing");
      continue;
    }
    const double t = compton_time(*mass);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1e", t);
    c.add(key, std::string(buf) == expected,
          std::string(key) + ": " + Checks::sci(t) + " s -> " + buf + " (expected " + expected + ")");
  }
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "epsilon-factor table", 1.0, epsilon_table},
      {2, "Wigner basis", 10.0, wigner_basis},
      {3, "star algebra", 30.0, star_algebra},
      {4, "star square root", 60.0, star_square_root},
      {5, "figure 2 panels", 20.0, figure2},
      {6, "figure 3 fields", 20.0, figure3},
      {7, "evolution equivalence", 120.0, evolution},
      {8, "constraints", 5.0, constraints},
      {9, "Compton times", 1.0, compton},
  };
  int failures = 0;
  for (const auto& cr : criteria) {
    Checks checks;
    const auto start = std::chrono::steady_clock::now();
    try {
      cr.body(checks);
    } catch (const std::exception& e) {
      checks.add("exception", false, std::string("threw: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    checks.add("runtime", secs < cr.budget_s, "runtime " + Checks::fixed(secs) + " s (<" + Checks::fixed(cr.budget_s) + " s)");
    std::string failed;
    for (const auto& name : checks.failed()) failed += (failed.empty() ? " [failed: " : ", ") + name;
    if (!failed.empty()) failed += "]";
    std::printf("%s %d %s: %s%s\n", checks.ok() ? "PASS" : "FAIL", cr.id, cr.title, checks.details().c_str(),
                failed.c_str());
    std::fflush(stdout);
    failures += checks.ok() ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
