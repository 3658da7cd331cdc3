#pragma once

#include <cstddef>
#include <span>

namespace relwig {

/// Generalized Laguerre polynomial L_k^alpha(x) by upward three-term recurrence.
double laguerre(unsigned k, unsigned alpha, double x);

/// log(n!) via lgamma.
double log_factorial(unsigned n);

/// Fills out[m] = sqrt(m!/(m+d)!) L_m^d(x) x^(d/2) e^(-x/2) for m = 0..out.size()-1.
///
/// These are the radial factors of the oscillator Wigner matrix elements; they
/// stay O(1) for all m, d, x >= 0, so the factorial ratio never has to be formed
/// explicitly (the starting value is built from log-factorials).
void scaled_laguerre_family(unsigned d, double x, std::span<double> out);

/// Normalised Hermite functions h_n(x) = (2^n n! sqrt(pi))^(-1/2) H_n(x) e^(-x^2/2)
/// for n = 0..out.size()-1 (stable recurrence).
void hermite_functions(double x, std::span<double> out);

}  // namespace relwig
