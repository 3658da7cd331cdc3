#pragma once

// Four-component Wigner function of a charge-invariant state, assembled from
// energy-representation coefficients, with distributions, moments, purity and
// even-odd constraints and a static decoherence kernel.

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "relwig/grid.hpp"
#include "relwig/spectra.hpp"

namespace relwig {

enum class Branch { Plus, Minus };
enum class Axis { Position, Momentum };

const char* to_string(Axis axis);
Axis parse_axis(const std::string& name);

/// C_{n;+}, C_{n;-} for n < N.
struct ChargeStateVector {
  Eigen::VectorXcd plus, minus;

  std::size_t size() const { return static_cast<std::size_t>(plus.size()); }
  double norm() const;  // sum |C_+|^2 + sum |C_-|^2
  /// Throws std::invalid_argument on length mismatch or |norm - 1| > tol.
  void validate(double tol = 1e-12) const;

  static ChargeStateVector eigenstate(std::size_t n_levels, std::size_t n, Branch b = Branch::Plus);
  /// Plus-branch superposition sum_k c_k |n_k>, normalised.
  static ChargeStateVector superposition(std::size_t n_levels,
                                         const std::vector<std::pair<std::size_t, cplx>>& terms);
};

/// rho^{[±]}(m,n) = C*_{m±} C_{n±}; sigma^{{±}}(m,n) = C*_{m±} C_{n∓}; odd_minus = odd_plus^H.
struct CoefficientMatrices {
  Eigen::MatrixXcd even_plus, even_minus, odd_plus, odd_minus;

  std::size_t size() const { return static_cast<std::size_t>(even_plus.rows()); }
  const Eigen::MatrixXcd& even(Branch b) const { return b == Branch::Plus ? even_plus : even_minus; }

  static CoefficientMatrices from_state(const ChargeStateVector& state);
  static CoefficientMatrices zero(std::size_t n);
  /// sum_k w_k (C*C)_k over pure states; weights must sum to 1.
  static CoefficientMatrices mixture(const std::vector<std::pair<double, ChargeStateVector>>& parts);

  /// Total even trace (sum over both branches).
  double trace() const;
  /// Max of the Hermiticity and odd-conjugacy residuals.
  double structure_residual() const;
  /// Throws std::invalid_argument on shape or structure violations (> tol).
  void validate(double tol = 1e-10) const;
};

/// a(m,n): Hermitian, a(n,n) = 1, |a(m,n)| < 1 off the diagonal (the all-ones
/// kernel is accepted as the no-environment limit).
class DecoherenceKernel {
 public:
  explicit DecoherenceKernel(Eigen::MatrixXcd a);
  /// a(m,n) = exp(-gamma (m - n)^2), gamma >= 0 (may be +inf).
  static DecoherenceKernel gaussian(std::size_t n, double gamma);

  const Eigen::MatrixXcd& matrix() const { return a_; }
  std::size_t size() const { return static_cast<std::size_t>(a_.rows()); }

 private:
  Eigen::MatrixXcd a_;
};

/// Even matrices multiplied element-wise by a; odd matrices unchanged.
CoefficientMatrices apply_decoherence(const CoefficientMatrices& coeffs,
                                      const DecoherenceKernel& kernel);

struct WignerComponents {
  PhaseGrid grid;
  ComplexField even_plus, even_minus, odd_plus, odd_minus;
  double state_trace = 1.0;
  std::vector<std::string> warnings;

  /// even_plus + even_minus + odd_plus + odd_minus.
  ComplexField total() const;
};

/// Wigner expansion coefficients c(n,m) of sum c W_nm (transposed layout).
Eigen::MatrixXcd even_wigner_coefficients(const Eigen::MatrixXcd& rho, const ChargeFactor& f);
Eigen::MatrixXcd odd_wigner_coefficients(const Eigen::MatrixXcd& sigma, const ChargeFactor& f,
                                         Branch b);

/// W_[±] = sum eps(m,n) W_nm rho^{[±]}(m,n);  W_{±} = ∓ sum chi(m,n) W_nm sigma^{{±}}(m,n).
/// Nonlocal mode: pass nonlocal_factors(N).
WignerComponents assemble_wigner(const CoefficientMatrices& coeffs, const ChargeFactor& factors,
                                 const PhaseGrid& grid, bool include_odd = true);

struct WignerDiagnostics {
  double even_imag = 0.0;         // max |Im W_[±]|
  double conjugacy = 0.0;         // max |W_{+} - conj W_{-}|
  double even_integral = 0.0;     // Int (W_[+] + W_[-])
  double odd_integral = 0.0;      // max |Int W_{±}|
  double min_even = 0.0;          // most negative value of W_[+] + W_[-]
};
WignerDiagnostics diagnose(const WignerComponents& w);

/// Energy-basis eigenfunctions on an axis: h_n(x) (position) or (-i)^n h_n(p) (momentum).
cplx basis_function(Axis axis, std::size_t n, double x);

/// rho_b(x) = sum eps(m,n) rho_b(m,n) conj(phi_m(x)) phi_n(x). May be negative.
std::vector<double> distribution(const CoefficientMatrices& coeffs, const ChargeFactor& factors,
                                 Axis axis, std::span<const double> xs, Branch b = Branch::Plus);

/// <m| x^k |n> for m,n < n_levels (x = q or p in oscillator units), exact via
/// ladder matrices of size n_levels + k.
Eigen::MatrixXcd power_matrix(Axis axis, unsigned k, std::size_t n_levels);

/// sum over both branches of sum_{m,n} eps(m,n) rho(m,n) <m|A|n>; include_odd adds
/// the odd parts with their chi factors and sign.
cplx mean_value(const CoefficientMatrices& coeffs, const ChargeFactor& factors,
                const Eigen::MatrixXcd& a, bool include_odd = false);

/// Even-part mean of x^k. Throws std::invalid_argument when k >= N.
double moment(const CoefficientMatrices& coeffs, const ChargeFactor& factors, Axis axis, unsigned k);

struct PurityReport {
  bool is_pure = true;
  double max_minor = 0.0;
  bool odd_is_pure = true;
  double odd_max_minor = 0.0;
};

using Mask = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Max |B(m,n) B(m',n') - B(m,n') B(m',n)| over all index quadruples. With a
/// mask, minors touching an entry whose mask is false are skipped.
double max_minor(const Eigen::MatrixXcd& b, const Mask* usable = nullptr);

/// B = w / eps (even; per branch) and w / chi off the diagonal (odd).
PurityReport purity_from_wigner_coefficients(const Eigen::MatrixXcd& w_even_plus,
                                             const Eigen::MatrixXcd& w_even_minus,
                                             const Eigen::MatrixXcd& w_odd_plus,
                                             const ChargeFactor& factors, double tol = 1e-8);
PurityReport purity_criterium(const CoefficientMatrices& coeffs, const ChargeFactor& factors,
                              double tol = 1e-8);

/// max |rho+_{mn} rho-_{m'n'} - sigma+_{mn'} sigma-_{m'n}|; 0 when a branch is empty.
double even_odd_constraint(const CoefficientMatrices& coeffs);

}  // namespace relwig
