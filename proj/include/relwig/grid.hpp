#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace relwig {

using cplx = std::complex<double>;

enum class UnitsTag { RotatorDimensionless, FreeParticle };

const char* to_string(UnitsTag units);

/// Uniform, cell-centred (p,q) sampling: p_i = p_min + (i + 1/2) dp with
/// dp = (p_max - p_min) / np, likewise for q. The cell-centred layout makes
/// p -> -p and p <-> q map grid points onto grid points for symmetric boxes.
struct PhaseGrid {
  double p_min = -5.0, p_max = 5.0;
  double q_min = -5.0, q_max = 5.0;
  std::size_t np = 256, nq = 256;
  UnitsTag units = UnitsTag::RotatorDimensionless;

  /// Validates: np, nq >= 8 and even; finite, ordered extents.
  static PhaseGrid make(double p_min, double p_max, double q_min, double q_max, std::size_t np,
                        std::size_t nq, UnitsTag units = UnitsTag::RotatorDimensionless);
  /// Square box [-half, half]^2 with n x n samples.
  static PhaseGrid square(double half, std::size_t n,
                          UnitsTag units = UnitsTag::RotatorDimensionless);
  /// Parses "pmin,pmax,qmin,qmax,np,nq".
  static PhaseGrid parse(const std::string& spec, UnitsTag units = UnitsTag::RotatorDimensionless);

  void validate() const;

  double dp() const { return (p_max - p_min) / static_cast<double>(np); }
  double dq() const { return (q_max - q_min) / static_cast<double>(nq); }
  double p(std::size_t i) const { return p_min + (static_cast<double>(i) + 0.5) * dp(); }
  double q(std::size_t j) const { return q_min + (static_cast<double>(j) + 0.5) * dq(); }
  double cell_area() const { return dp() * dq(); }
  std::size_t size() const { return np * nq; }
  /// Row-major (p-major) flat index.
  std::size_t index(std::size_t ip, std::size_t iq) const { return ip * nq + iq; }

  std::string describe() const;
  nlohmann::ordered_json to_json() const;

  friend bool operator==(const PhaseGrid&, const PhaseGrid&) = default;
};

/// Complex samples on a PhaseGrid, stored np x nq row-major (index ip*nq + iq).
class ComplexField {
 public:
  ComplexField() = default;
  explicit ComplexField(PhaseGrid grid, cplx fill = {0.0, 0.0});
  ComplexField(PhaseGrid grid, std::vector<cplx> values);

  template <class F>
  static ComplexField sample(const PhaseGrid& grid, F&& f) {
    ComplexField out(grid);
    for (std::size_t ip = 0; ip < grid.np; ++ip)
      for (std::size_t iq = 0; iq < grid.nq; ++iq) out.at(ip, iq) = f(grid.p(ip), grid.q(iq));
    return out;
  }

  const PhaseGrid& grid() const { return grid_; }
  std::vector<cplx>& values() { return values_; }
  const std::vector<cplx>& values() const { return values_; }
  cplx* data() { return values_.data(); }
  const cplx* data() const { return values_.data(); }
  std::size_t size() const { return values_.size(); }

  cplx& at(std::size_t ip, std::size_t iq) { return values_[grid_.index(ip, iq)]; }
  cplx at(std::size_t ip, std::size_t iq) const { return values_[grid_.index(ip, iq)]; }

  ComplexField& operator+=(const ComplexField& o);
  ComplexField& operator-=(const ComplexField& o);
  ComplexField& operator*=(cplx s);

  /// Trapezoid-equivalent (midpoint) phase-space integral.
  cplx integral() const;
  /// sqrt(sum |f|^2 dp dq).
  double l2_norm() const;
  double max_abs() const;
  double max_abs_imag() const;
  double min_real() const;
  bool all_finite() const;
  /// Location (ip, iq) of the first non-finite sample, or {np, nq} if none.
  std::pair<std::size_t, std::size_t> first_non_finite() const;

  ComplexField conj() const;
  ComplexField real_part() const;

 private:
  PhaseGrid grid_;
  std::vector<cplx> values_;
};

ComplexField operator+(ComplexField a, const ComplexField& b);
ComplexField operator-(ComplexField a, const ComplexField& b);
ComplexField operator*(cplx s, ComplexField a);

/// Throws std::invalid_argument when the grids differ.
void require_same_grid(const ComplexField& a, const ComplexField& b, const char* what);

double l2_distance(const ComplexField& a, const ComplexField& b);
double relative_l2(const ComplexField& a, const ComplexField& reference);
/// Pointwise product.
ComplexField hadamard(const ComplexField& a, const ComplexField& b);

/// Metadata written in front of CSV exports (as "# key=value" lines) and under
/// "meta" in JSON exports.
using FieldMetadata = std::vector<std::pair<std::string, std::string>>;

/// Columns p,q,re,im; 17 significant digits.
void write_field_csv(std::ostream& os, const ComplexField& field, const FieldMetadata& meta = {});
nlohmann::ordered_json field_to_json(const ComplexField& field, const FieldMetadata& meta = {});

/// Formats a double with 17 significant digits (round-trip exact).
std::string format_double(double v);

}  // namespace relwig
