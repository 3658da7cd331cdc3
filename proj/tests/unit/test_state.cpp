#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "relwig/basis.hpp"
#include "relwig/state.hpp"

using namespace relwig;

namespace {

constexpr double lambda10 = 10.0;

ChargeStateVector sup02(std::size_t n = 3) { return ChargeStateVector::superposition(n, {{0, 1.0}, {2, 1.0}}); }

ChargeStateVector random_state(std::size_t n, bool both, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  ChargeStateVector s{Eigen::VectorXcd(n), Eigen::VectorXcd::Zero(n)};
  for (std::size_t k = 0; k < n; ++k) {
    s.plus(k) = cplx(g(rng), g(rng));
    if (both) s.minus(k) = cplx(g(rng), g(rng));
  }
  const double nrm = std::sqrt(s.norm());
  s.plus /= nrm;
  s.minus /= nrm;
  return s;
}

double max_abs(const ComplexField& f) { return f.max_abs(); }

}  // namespace

TEST_SUITE("state") {

TEST_CASE("state vector construction and validation") {
  const auto e = ChargeStateVector::eigenstate(4, 2, Branch::Minus);
  CHECK(e.norm() == 1.0);
  CHECK(e.minus(2) == cplx(1.0));
  const auto s = sup02();
  CHECK(std::abs(s.plus(0) - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(s.minus.norm() == 0.0);
  ChargeStateVector bad{Eigen::VectorXcd::Ones(2), Eigen::VectorXcd::Zero(2)};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  ChargeStateVector mism{Eigen::VectorXcd::Zero(2), Eigen::VectorXcd::Zero(3)};
  CHECK_THROWS_AS(mism.validate(), std::invalid_argument);
  CHECK_THROWS_AS(ChargeStateVector::eigenstate(3, 3), std::invalid_argument);
}

TEST_CASE("coefficient matrices") {
  const auto s = random_state(4, true, 7);
  const auto c = CoefficientMatrices::from_state(s);
  CHECK(c.trace() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(c.structure_residual() < 1e-15);
  CHECK(std::abs(c.even_plus(1, 3) - std::conj(s.plus(1)) * s.plus(3)) < 1e-15);
  CHECK(std::abs(c.odd_plus(1, 3) - std::conj(s.plus(1)) * s.minus(3)) < 1e-15);
  CHECK((c.odd_minus - c.odd_plus.adjoint()).norm() < 1e-15);
  auto broken = c;
  broken.odd_minus(0, 1) += 0.1;
  CHECK_THROWS_AS(broken.validate(), std::invalid_argument);
  CHECK_THROWS_AS(CoefficientMatrices::mixture({{0.5, s}, {0.4, s}}), std::invalid_argument);
}

TEST_CASE("eigenstate: W_nn, no odd part, identical in both modes") {
  const auto g = PhaseGrid::square(6.0, 64);
  for (std::size_t n : {0u, 1u, 3u}) {
    const auto c = CoefficientMatrices::from_state(ChargeStateVector::eigenstate(5, n));
    const auto std_w = assemble_wigner(c, charge_factors(rotator_spectrum(lambda10), 5), g);
    const auto nl_w = assemble_wigner(c, nonlocal_factors(5), g);
    CHECK(max_abs(std_w.even_plus - diagonal_wigner(n, g)) < 1e-12);
    CHECK(max_abs(std_w.odd_plus) == 0.0);
    CHECK(max_abs(std_w.odd_minus) == 0.0);
    CHECK(max_abs(std_w.even_plus - nl_w.even_plus) < 1e-12);
  }
}

TEST_CASE("superposition: interference amplified by epsilon(0,2)") {
  const auto g = PhaseGrid::square(5.0, 64);
  const auto f = charge_factors(rotator_spectrum(lambda10), 3);
  const double e02 = f.even(0, 2);
  CHECK(e02 == doctest::Approx(epsilon_pair(std::sqrt(1 + 200 * 0.5), std::sqrt(1 + 200 * 2.5))).epsilon(1e-15));
  const auto c = CoefficientMatrices::from_state(sup02());
  const auto mix = CoefficientMatrices::mixture({{0.5, ChargeStateVector::eigenstate(3, 0)},
                                                 {0.5, ChargeStateVector::eigenstate(3, 2)}});
  const auto w_std = assemble_wigner(c, f, g).even_plus;
  const auto w_nl = assemble_wigner(c, nonlocal_factors(3), g).even_plus;
  const auto w_mix = assemble_wigner(mix, f, g).even_plus;
  CHECK(max_abs((w_std - w_mix) - e02 * (w_nl - w_mix)) < 1e-12);
  CHECK(max_abs(w_nl - w_mix) > 0.05);
}

TEST_CASE("mixture: half the sum of the diagonal functions") {
  const auto g = PhaseGrid::square(5.0, 64);
  const auto mix = CoefficientMatrices::mixture({{0.5, ChargeStateVector::eigenstate(3, 0)},
                                                 {0.5, ChargeStateVector::eigenstate(3, 2)}});
  const auto w = assemble_wigner(mix, charge_factors(rotator_spectrum(lambda10), 3), g);
  const auto ref = 0.5 * (diagonal_wigner(0, g) + diagonal_wigner(2, g));
  CHECK(max_abs(w.even_plus - ref) < 1e-12);
  CHECK(max_abs(w.odd_plus) == 0.0);
}

TEST_CASE("reality, conjugacy and normalisation") {
  const auto g = PhaseGrid::square(8.0, 128);
  const auto f = charge_factors(rotator_spectrum(0.7), 4);
  for (unsigned seed : {1u, 2u, 3u}) {
    const auto w = assemble_wigner(CoefficientMatrices::from_state(random_state(4, true, seed)), f, g);
    const auto d = diagnose(w);
    CHECK(d.even_imag < 1e-10);
    CHECK(d.conjugacy < 1e-12);
    CHECK(d.even_integral == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(d.odd_integral < 1e-8);
    CHECK(max_abs(w.odd_plus - w.odd_minus.conj()) < 1e-12);
  }
}

TEST_CASE("odd parts carry chi with the metric sign") {
  const auto g = PhaseGrid::square(5.0, 32);
  const auto f = charge_factors(rotator_spectrum(1.0), 3);
  const auto c = CoefficientMatrices::from_state(random_state(3, true, 11));
  const auto w = assemble_wigner(c, f, g);
  ComplexField ref(g);
  for (std::size_t m = 0; m < 3; ++m)
    for (std::size_t n = 0; n < 3; ++n)
      ref += (-f.odd(m, n) * c.odd_plus(m, n)) * wigner_basis_element(n, m, g).field;
  CHECK(max_abs(w.odd_plus - ref) < 1e-12);
}

TEST_CASE("stationary coincidence for eigenprojector mixtures") {
  const auto g = PhaseGrid::square(6.0, 64);
  const auto f = charge_factors(rotator_spectrum(3.0), 5);
  const auto mix = CoefficientMatrices::mixture({{0.2, ChargeStateVector::eigenstate(5, 0)},
                                                 {0.5, ChargeStateVector::eigenstate(5, 3)},
                                                 {0.3, ChargeStateVector::eigenstate(5, 4, Branch::Minus)}});
  const auto a = assemble_wigner(mix, f, g);
  const auto b = assemble_wigner(mix, nonlocal_factors(5), g);
  CHECK(max_abs(a.total() - b.total()) < 1e-12);
}

TEST_CASE("epsilon enhancement and phase preservation of coefficients") {
  const auto f = charge_factors(rotator_spectrum(2.0), 5);
  const auto rho = CoefficientMatrices::from_state(random_state(5, false, 5)).even_plus;
  const auto cs = even_wigner_coefficients(rho, f);
  const auto cn = even_wigner_coefficients(rho, nonlocal_factors(5));
  for (long m = 0; m < 5; ++m)
    for (long n = 0; n < 5; ++n) {
      if (m == n) {
        CHECK(std::abs(cs(m, n) - cn(m, n)) < 1e-15);
        continue;
      }
      CHECK(std::abs(cs(m, n)) > std::abs(cn(m, n)));
      CHECK(std::abs(cs(m, n)) == doctest::Approx(f.even(m, n) * std::abs(cn(m, n))).epsilon(1e-14));
      CHECK(std::abs(std::arg(cs(m, n)) - std::arg(cn(m, n))) < 1e-12);
    }
}

TEST_CASE("decoherence kernel") {
  const auto c = CoefficientMatrices::from_state(sup02());
  SUBCASE("all-ones kernel leaves the state unchanged") {
    const auto out = apply_decoherence(c, DecoherenceKernel(Eigen::MatrixXcd::Ones(3, 3)));
    CHECK((out.even_plus - c.even_plus).norm() == 0.0);
  }
  SUBCASE("infinite gamma dephases completely") {
    const auto out = apply_decoherence(c, DecoherenceKernel::gaussian(3, std::numeric_limits<double>::infinity()));
    CHECK((out.even_plus - Eigen::MatrixXcd(c.even_plus.diagonal().asDiagonal())).norm() == 0.0);
    CHECK((out.odd_plus - c.odd_plus).norm() == 0.0);
  }
  SUBCASE("a * eps = 1 reproduces the nonlocal interference term") {
    const auto f = charge_factors(rotator_spectrum(lambda10), 3);
    const double gamma = std::log(f.even(0, 2)) / 4;
    const auto kernel = DecoherenceKernel::gaussian(3, gamma);
    CHECK(std::abs(kernel.matrix()(0, 2)) * f.even(0, 2) == doctest::Approx(1.0).epsilon(1e-14));
    const auto g = PhaseGrid::square(5.0, 64);
    const auto w_dec = assemble_wigner(apply_decoherence(c, kernel), f, g).even_plus;
    const auto w_nl = assemble_wigner(c, nonlocal_factors(3), g).even_plus;
    CHECK(max_abs(w_dec - w_nl) < 1e-12);
  }
  SUBCASE("off-diagonals shrink; a * eps above and below one") {
    const auto f = charge_factors(rotator_spectrum(lambda10), 3);
    for (double gamma : {0.005, 0.2}) {
      const auto k = DecoherenceKernel::gaussian(3, gamma);
      const auto out = apply_decoherence(c, k);
      CHECK(std::abs(out.even_plus(0, 2)) < std::abs(c.even_plus(0, 2)));
      CHECK(out.even_plus(0, 0) == c.even_plus(0, 0));
      const double product = std::abs(k.matrix()(0, 2)) * f.even(0, 2);
      if (gamma < 0.01) CHECK(product > 1.0);
      else CHECK(product < 1.0);
    }
  }
  SUBCASE("invariants are enforced") {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(3, 3);
    a(0, 1) = cplx(0.5, 0.1);
    CHECK_THROWS_AS(DecoherenceKernel{a}, std::invalid_argument);  // not Hermitian
    a(1, 0) = std::conj(a(0, 1));
    CHECK_NOTHROW(DecoherenceKernel{a});
    a(2, 2) = 0.9;
    CHECK_THROWS_AS(DecoherenceKernel{a}, std::invalid_argument);
    a(2, 2) = 1.0;
    a(0, 1) = 1.0;
    a(1, 0) = 1.0;
    CHECK_THROWS_AS(DecoherenceKernel{a}, std::invalid_argument);  // |a| = 1 in a non-trivial kernel
    CHECK_THROWS_AS(DecoherenceKernel::gaussian(3, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(apply_decoherence(c, DecoherenceKernel::gaussian(4, 0.1)), std::invalid_argument);
  }
}

TEST_CASE("distributions") {
  std::vector<double> xs;
  const double h = 0.02;
  for (double x = -12.0; x <= 12.0 + 1e-9; x += h) xs.push_back(x);
  const auto f = charge_factors(rotator_spectrum(lambda10), 6);

  const auto c0 = CoefficientMatrices::from_state(ChargeStateVector::eigenstate(6, 0));
  for (Axis ax : {Axis::Position, Axis::Momentum}) {
    const auto rho = distribution(c0, f, ax, xs);
    for (std::size_t i = 0; i < xs.size(); i += 50) {
      const double h0 = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * xs[i] * xs[i]);
      CHECK(rho[i] == doctest::Approx(h0 * h0).epsilon(1e-13));
      CHECK(rho[i] > 0.0);
    }
  }

  const auto cs = CoefficientMatrices::from_state(sup02(6));
  const auto mix = CoefficientMatrices::mixture({{0.5, ChargeStateVector::eigenstate(6, 0)},
                                                 {0.5, ChargeStateVector::eigenstate(6, 2)}});
  const auto r_std = distribution(cs, f, Axis::Position, xs);
  const auto r_nl = distribution(cs, nonlocal_factors(6), Axis::Position, xs);
  const auto r_mix = distribution(mix, f, Axis::Position, xs);
  for (std::size_t i = 0; i < xs.size(); ++i)
    CHECK(std::abs((r_std[i] - r_mix[i]) - f.even(0, 2) * (r_nl[i] - r_mix[i])) < 1e-13);

  for (unsigned seed : {3u, 4u}) {
    const auto c = CoefficientMatrices::from_state(random_state(6, false, seed));
    for (Axis ax : {Axis::Position, Axis::Momentum}) {
      const auto r = distribution(c, f, ax, xs);
      double integral = 0.0;
      for (double v : r) integral += v * h;
      CHECK(integral == doctest::Approx(c.trace()).epsilon(1e-8));
    }
  }
}

TEST_CASE("power matrices") {
  const auto q2 = power_matrix(Axis::Position, 2, 3);
  const auto p2 = power_matrix(Axis::Momentum, 2, 3);
  CHECK(std::abs(q2(0, 0) - 0.5) < 1e-15);
  CHECK(std::abs(q2(0, 2) - std::sqrt(2.0) / 2) < 1e-15);
  CHECK(std::abs(p2(0, 2) + std::sqrt(2.0) / 2) < 1e-15);
  CHECK(std::abs(q2(1, 1) - 1.5) < 1e-15);
  const auto q1 = power_matrix(Axis::Position, 1, 4);
  CHECK(std::abs(q1(0, 1) - std::sqrt(0.5)) < 1e-15);
  CHECK(std::abs(q1(0, 2)) == 0.0);
}

TEST_CASE("moments") {
  const auto f = charge_factors(rotator_spectrum(lambda10), 3);
  for (std::size_t n = 0; n < 3; ++n) {
    const auto c = CoefficientMatrices::from_state(ChargeStateVector::eigenstate(3, n));
    CHECK(std::abs(moment(c, f, Axis::Position, 1)) < 1e-15);
    CHECK(std::abs(moment(c, f, Axis::Momentum, 1)) < 1e-15);
  }
  const auto c0 = CoefficientMatrices::from_state(ChargeStateVector::eigenstate(3, 0));
  CHECK(moment(c0, f, Axis::Position, 2) == doctest::Approx(0.5).epsilon(1e-15));

  const auto cs = CoefficientMatrices::from_state(sup02());
  const double oracle = 1.5 + f.even(0, 2) * std::sqrt(2.0) / 2;
  CHECK(moment(cs, f, Axis::Position, 2) == doctest::Approx(oracle).epsilon(1e-14));
  CHECK(std::abs(moment(cs, f, Axis::Position, 2) - 2.264541) < 1e-6);
  CHECK(std::abs(moment(cs, nonlocal_factors(3), Axis::Position, 2) - 2.207107) < 1e-6);
  CHECK(moment(cs, f, Axis::Momentum, 2) == doctest::Approx(1.5 - f.even(0, 2) * std::sqrt(2.0) / 2).epsilon(1e-14));
  CHECK_THROWS_AS(moment(cs, f, Axis::Position, 3), std::invalid_argument);
}

TEST_CASE("purity criterium") {
  const auto f = charge_factors(rotator_spectrum(lambda10), 3);
  for (unsigned seed : {1u, 2u}) {
    const auto r = purity_criterium(CoefficientMatrices::from_state(random_state(3, true, seed)), f);
    CHECK(r.is_pure);
    CHECK(r.max_minor < 1e-12);
    CHECK(r.odd_is_pure);
  }
  const auto mix = CoefficientMatrices::mixture({{0.5, ChargeStateVector::eigenstate(3, 0)},
                                                 {0.5, ChargeStateVector::eigenstate(3, 2)}});
  const auto rm = purity_criterium(mix, f);
  CHECK_FALSE(rm.is_pure);
  CHECK(rm.max_minor == doctest::Approx(0.25).epsilon(1e-14));

  const auto c = CoefficientMatrices::from_state(sup02());
  for (double gamma : {0.01, 0.1, 1.0}) {
    const auto k = DecoherenceKernel::gaussian(3, gamma);
    const double a = std::abs(k.matrix()(0, 2));
    const auto r = purity_criterium(apply_decoherence(c, k), f);
    CHECK_FALSE(r.is_pure);
    CHECK(r.max_minor == doctest::Approx(0.25 * (1 - a * a)).epsilon(1e-12));
  }
}

TEST_CASE("even-odd constraint") {
  for (unsigned seed : {1u, 2u, 3u}) {
    const auto c = CoefficientMatrices::from_state(random_state(4, true, seed));
    CHECK(even_odd_constraint(c) < 1e-12);
  }
  CHECK(even_odd_constraint(CoefficientMatrices::from_state(random_state(4, false, 9))) == 0.0);

  const auto c = CoefficientMatrices::from_state(random_state(4, true, 4));
  std::mt19937 rng(99);
  std::normal_distribution<double> g;
  Eigen::MatrixXcd d(4, 4);
  for (long i = 0; i < 4; ++i)
    for (long j = 0; j < 4; ++j) d(i, j) = cplx(g(rng), g(rng));
  std::vector<double> v;
  for (double delta : {1e-4, 2e-4, 4e-4}) {
    auto p = c;
    p.odd_plus += delta * d;
    p.odd_minus = p.odd_plus.adjoint();
    v.push_back(even_odd_constraint(p));
  }
  CHECK(v[1] / v[0] == doctest::Approx(2.0).epsilon(0.01));
  CHECK(v[2] / v[1] == doctest::Approx(2.0).epsilon(0.01));
}

}  // TEST_SUITE
