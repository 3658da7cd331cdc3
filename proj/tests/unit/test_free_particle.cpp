#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "relwig/free_particle.hpp"

using namespace relwig;

namespace {

constexpr double pi = std::numbers::pi;

struct Packet {
  double p0, q0, w, chirp;
  cplx operator()(double p) const {
    const double d = p - p0;
    return std::exp(cplx(-d * d / (2 * w * w), -p * q0 + chirp * d * d));
  }
};

// Textbook Wigner transform of an analytic psi by direct trapezoid quadrature in P.
ComplexField oracle_wigner(const Packet& psi, const PhaseGrid& g) {
  ComplexField out(g);
  const double h = 0.02, lim = 16.0;
  for (std::size_t i = 0; i < g.np; ++i)
    for (std::size_t j = 0; j < g.nq; ++j) {
      cplx s = 0.0;
      for (double P = -lim; P <= lim + 1e-12; P += h)
        s += std::conj(psi(g.p(i) + P / 2)) * psi(g.p(i) - P / 2) * std::exp(cplx(0, -P * g.q(j)));
      out.at(i, j) = s * h / (2 * pi);
    }
  return out;
}

}  // namespace

TEST_SUITE("free_particle") {

TEST_CASE("gaussian momentum state is normalised") {
  const auto g = PhaseGrid::make(-20, 20, -1, 1, 256, 8, UnitsTag::FreeParticle);
  const auto psi = gaussian_momentum_state(g, 3.0, 1.0, 0.5);
  double s = 0.0;
  for (auto v : psi) s += std::norm(v);
  CHECK(s * g.dp() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("unit kernel reproduces the Gaussian Wigner function") {
  const auto g = PhaseGrid::make(-10, 10, -3, 3, 128, 64, UnitsTag::FreeParticle);
  const double w = 1.3, p0 = 0.8, q0 = -0.6;
  const auto psi = gaussian_momentum_state(g, w, p0, q0);
  const auto f = free_wigner_pair(psi, g, WignerKernel::Unit);
  const auto ref = ComplexField::sample(g, [&](double p, double q) {
    return cplx(std::exp(-(p - p0) * (p - p0) / (w * w) - w * w * (q - q0) * (q - q0)) / pi, 0.0);
  });
  CHECK(relative_l2(f, ref) < 1e-10);
  CHECK(f.min_real() > -1e-12);
}

TEST_CASE("unit kernel against a double-quadrature oracle on random packets") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto g = PhaseGrid::make(-10, 10, -3, 3, 64, 32, UnitsTag::FreeParticle);
  for (int trial = 0; trial < 3; ++trial) {
    const Packet pk{-2.0 + 4.0 * u(rng), -1.5 + 3.0 * u(rng), 0.8 + 0.7 * u(rng), 0.3 * u(rng)};
    std::vector<cplx> psi(g.np);
    for (std::size_t i = 0; i < g.np; ++i) psi[i] = pk(g.p(i));
    const auto f = free_wigner_pair(psi, g, WignerKernel::Unit);
    CHECK(relative_l2(f, oracle_wigner(pk, g)) < 1e-6);
  }
}

TEST_CASE("epsilon kernel at relativistic width has negative lobes and stays real") {
  // p range wide enough that truncating psi leaves no visible ripples
  const auto g = PhaseGrid::make(-64, 64, -4, 4, 512, 256, UnitsTag::FreeParticle);
  const auto psi = gaussian_momentum_state(g, 8.0);
  const auto eps = free_wigner_pair(psi, g, WignerKernel::Epsilon);
  const auto unit = free_wigner_pair(psi, g, WignerKernel::Unit);
  CHECK(eps.min_real() < 0.0);
  CHECK(unit.min_real() > -1e-14);
  CHECK(eps.max_abs_imag() < 1e-12);
  // the epsilon field keeps exponential tails on the Compton scale beyond |q| = 4
  CHECK(eps.integral().real() == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(unit.integral().real() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("epsilon kernel reduces to unit kernel for a slow packet") {
  const auto g = PhaseGrid::make(-0.06, 0.06, -600, 600, 256, 256, UnitsTag::FreeParticle);
  const auto psi = gaussian_momentum_state(g, 0.01);
  const auto eps = free_wigner_pair(psi, g, WignerKernel::Epsilon);
  const auto unit = free_wigner_pair(psi, g, WignerKernel::Unit);
  CHECK(relative_l2(eps, unit) < 1e-4);
}

TEST_CASE("momentum marginal and first position moment are kernel independent") {
  const auto g = PhaseGrid::make(-12, 12, -12, 12, 256, 256, UnitsTag::FreeParticle);
  const auto psi = gaussian_momentum_state(g, 2.0);
  const auto eps = free_wigner_pair(psi, g, WignerKernel::Epsilon);
  const auto unit = free_wigner_pair(psi, g, WignerKernel::Unit);
  double worst = 0.0, q_eps = 0.0, q_unit = 0.0;
  for (std::size_t i = 0; i < g.np; ++i) {
    cplx s = 0.0;
    for (std::size_t j = 0; j < g.nq; ++j) {
      s += eps.at(i, j);
      q_eps += g.q(j) * eps.at(i, j).real();
      q_unit += g.q(j) * unit.at(i, j).real();
    }
    worst = std::max(worst, std::abs(s * g.dq() - std::norm(psi[i])));
  }
  CHECK(worst < 1e-8);
  CHECK(std::abs(q_eps - q_unit) * g.cell_area() < 1e-10);
}

TEST_CASE("guards") {
  const auto g = PhaseGrid::make(-3, 3, -1, 1, 64, 16, UnitsTag::FreeParticle);
  const auto wide = gaussian_momentum_state(g, 2.0);
  CHECK_THROWS_AS(free_wigner_pair(wide, g, WignerKernel::Unit), std::invalid_argument);
  const auto narrow = gaussian_momentum_state(g, 0.5);
  CHECK_NOTHROW(free_wigner_pair(narrow, g, WignerKernel::Unit));
  const auto far = PhaseGrid::make(-3, 3, -40, 40, 64, 16, UnitsTag::FreeParticle);
  CHECK_THROWS_AS(free_wigner_pair(narrow, far, WignerKernel::Unit), std::invalid_argument);
  const auto rot = PhaseGrid::make(-3, 3, -1, 1, 64, 16);
  CHECK_THROWS_AS(free_wigner_pair(narrow, rot, WignerKernel::Unit), std::invalid_argument);
  std::vector<cplx> short_psi(10, 0.0);
  CHECK_THROWS_AS(free_wigner_pair(short_psi, g, WignerKernel::Unit), std::invalid_argument);
  CHECK(parse_wigner_kernel("epsilon") == WignerKernel::Epsilon);
  CHECK_THROWS_AS(parse_wigner_kernel("chi"), std::invalid_argument);
}

}
