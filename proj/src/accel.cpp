#include "relwig/accel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace relwig {

const char* to_string(Acceleration accel) {
  return accel == Acceleration::Euler ? "euler" : "cesaro";
}

Acceleration parse_acceleration(const char* name) {
  const std::string s(name);
  if (s == "euler" || s == "Euler") return Acceleration::Euler;
  if (s == "cesaro" || s == "Cesaro") return Acceleration::Cesaro;
  throw std::invalid_argument("unknown acceleration '" + s + "' (expected euler|cesaro)");
}

double EulerAccumulator::add(double term) {
  // diag_[i] holds A[i][k-1-i] from the previous anti-diagonal, where
  // A[0][j] = S_j and A[i][j] = (A[i-1][j] + A[i-1][j+1]) / 2.
  partial_ += term;
  const std::size_t k = diag_.size();
  next_.resize(k + 1);
  next_[0] = partial_;
  for (std::size_t i = 1; i <= k; ++i) next_[i] = 0.5 * (diag_[i - 1] + next_[i - 1]);
  diag_.swap(next_);
  value_ = diag_[k];
  return value_;
}

CesaroAccumulator::CesaroAccumulator(unsigned order) : order_(order), running_(order, 0.0) {
  if (order == 0) throw std::invalid_argument("Cesaro order must be >= 1");
}

double CesaroAccumulator::add(double term) {
  partial_ += term;
  ++count_;
  double level = partial_;
  const double n = static_cast<double>(count_);
  for (unsigned r = 0; r < order_; ++r) {
    running_[r] += level;
    level = running_[r] / n;
  }
  value_ = level;
  return value_;
}

SeriesEstimate accelerated_sum(const std::function<double(std::size_t)>& term, Acceleration accel,
                               const SeriesControl& control) {
  EulerAccumulator euler;
  CesaroAccumulator cesaro(control.cesaro_order);
  SeriesEstimate est;
  double prev = 0.0;
  std::size_t passes = 0;
  for (std::size_t k = 0; k < control.max_terms; ++k) {
    const double t = term(k);
    const double v = accel == Acceleration::Euler ? euler.add(t) : cesaro.add(t);
    est.value = v;
    est.terms_used = k + 1;
    if (!std::isfinite(v)) {
      est.converged = false;
      est.last_delta = std::numeric_limits<double>::infinity();
      return est;
    }
    if (k > 0) {
      est.last_delta = std::abs(v - prev);
      const bool pass = est.last_delta <= control.tolerance * std::max(1.0, std::abs(v));
      if (k >= control.min_terms && pass) {
        if (++passes >= control.confirmations) {
          est.converged = true;
          return est;
        }
      } else {
        passes = 0;
      }
    }
    prev = v;
  }
  return est;
}

}  // namespace relwig
