#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace relwig {

enum class Acceleration { Euler, Cesaro };

const char* to_string(Acceleration accel);
Acceleration parse_acceleration(const char* name);

/// Euler (binomial) means of a sequence of partial sums, updated one term at a
/// time along anti-diagonals of the averaging table: O(k) work per term.
class EulerAccumulator {
 public:
  /// Adds the next series term and returns the current Euler mean T_k.
  double add(double term);
  double value() const { return value_; }
  std::size_t count() const { return diag_.size(); }

 private:
  double partial_ = 0.0;
  double value_ = 0.0;
  std::vector<double> diag_;
  std::vector<double> next_;
};

/// Iterated Cesaro (Hoelder) means of the partial sums.
class CesaroAccumulator {
 public:
  explicit CesaroAccumulator(unsigned order = 2);
  double add(double term);
  double value() const { return value_; }
  std::size_t count() const { return count_; }

 private:
  unsigned order_;
  std::size_t count_ = 0;
  double partial_ = 0.0;
  double value_ = 0.0;
  std::vector<double> running_;  // running sums of each averaging level
};

struct SeriesEstimate {
  double value = 0.0;
  bool converged = false;
  std::size_t terms_used = 0;
  double last_delta = 0.0;  // |T_k - T_{k-1}| at exit
};

struct SeriesControl {
  std::size_t max_terms = 2048;
  double tolerance = 1e-10;       // relative Cauchy tolerance, scaled by max(1, |T|)
  std::size_t min_terms = 0;      // Cauchy test armed only past this many terms
  std::size_t confirmations = 3;  // consecutive passes required
  unsigned cesaro_order = 2;
};

/// Sums term(0) + term(1) + ... with the requested acceleration, stopping on
/// the Cauchy test or at max_terms (converged = false).
SeriesEstimate accelerated_sum(const std::function<double(std::size_t)>& term, Acceleration accel,
                               const SeriesControl& control);

}  // namespace relwig
