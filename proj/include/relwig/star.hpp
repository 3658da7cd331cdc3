#pragma once

// Moyal star product  a * b = a exp{(i hbar/2)(<-d_q ->d_p - <-d_p ->d_q)} b
// on a PhaseGrid, with brackets and the star exponential.

#include <cstddef>
#include <memory>
#include <string>

#include "relwig/grid.hpp"

namespace relwig {

struct SymbolField {
  ComplexField field;
  double hbar = 1.0;  // effective hbar of the grid algebra

  const PhaseGrid& grid() const { return field.grid(); }
};

/// IntegralFFT: twisted convolution evaluated spectrally; exact for
/// band-limited periodic symbols, so non-decaying symbols need a far-field
/// taper first. TruncatedSeries: bidifferential expansion to order K with
/// 11-point finite differences; exact for polynomials of degree <= min(K, 10).
struct StarBackend {
  enum class Kind { IntegralFFT, TruncatedSeries };
  Kind kind = Kind::IntegralFFT;
  unsigned order = 6;
  std::size_t padding = 2;

  static StarBackend fft(std::size_t padding = 2) { return {Kind::IntegralFFT, 6, padding}; }
  static StarBackend series(unsigned order) { return {Kind::TruncatedSeries, order, 1}; }
  void validate() const;
  std::string describe() const;
};

/// Throws std::runtime_error naming the first non-finite sample's (p,q).
void require_finite(const ComplexField& f, const char* what);

SymbolField star(const SymbolField& a, const SymbolField& b, const StarBackend& backend = {});
/// (a*b - b*a) / (i hbar)
SymbolField moyal_bracket(const SymbolField& a, const SymbolField& b,
                          const StarBackend& backend = {});
/// (a*b + b*a) / (i hbar)
SymbolField anti_moyal_bracket(const SymbolField& a, const SymbolField& b,
                               const StarBackend& backend = {});
/// Pointwise Poisson bracket d_q a d_p b - d_p a d_q b (finite differences).
ComplexField poisson_bracket(const ComplexField& a, const ComplexField& b);

/// d^k f / dx^k along p (axis 0) or q (axis 1), 11-point Fornberg stencils
/// (one-sided near the edges).
ComplexField derivative(const ComplexField& f, int axis, unsigned order);

struct StarExpResult {
  SymbolField value;
  double residual = 0.0;  // sup-norm of the last Taylor term relative to the sum
  bool diverged = false;  // term norms were still growing at truncation
  unsigned squarings = 0;
};

/// exp_*(t a) = sum_k t^k a^{*k} / k!, nterms Taylor terms. When
/// sup|a| |t| > 1 the argument is scaled by 2^-s and the result star-squared
/// s times.
StarExpResult star_exp(const SymbolField& a, cplx t, const StarBackend& backend = {},
                       unsigned nterms = 30);

/// Star multiplication by a fixed IntegralFFT symbol h with the p-shifted
/// spectral rows of h precomputed, for repeated use in time stepping.
class MoyalOperator {
 public:
  /// cache: keep the shifted rows (2 * nq^2 * padding * np complex values).
  explicit MoyalOperator(const SymbolField& h, std::size_t padding = 2, bool cache = true);
  ~MoyalOperator();
  MoyalOperator(MoyalOperator&&) noexcept;
  MoyalOperator& operator=(MoyalOperator&&) noexcept;

  ComplexField left(const ComplexField& w) const;          // h * w
  ComplexField right(const ComplexField& w) const;         // w * h
  ComplexField bracket(const ComplexField& w) const;       // {h, w}_M
  ComplexField anti_bracket(const ComplexField& w) const;  // [h, w]_M
  const SymbolField& symbol() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace relwig
