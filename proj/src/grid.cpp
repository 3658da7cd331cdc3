#include "relwig/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace relwig {

const char* to_string(UnitsTag units) {
  return units == UnitsTag::FreeParticle ? "FreeParticle" : "RotatorDimensionless";
}

PhaseGrid PhaseGrid::make(double p_min, double p_max, double q_min, double q_max, std::size_t np,
                          std::size_t nq, UnitsTag units) {
  PhaseGrid g{p_min, p_max, q_min, q_max, np, nq, units};
  g.validate();
  return g;
}

PhaseGrid PhaseGrid::square(double half, std::size_t n, UnitsTag units) {
  return make(-half, half, -half, half, n, n, units);
}

PhaseGrid PhaseGrid::parse(const std::string& spec, UnitsTag units) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
  if (parts.size() != 6)
    throw std::invalid_argument("grid spec '" + spec +
                                "' must have six fields: pmin,pmax,qmin,qmax,np,nq");
  try {
    std::size_t pos = 0;
    auto num = [&](const std::string& s) {
      const double v = std::stod(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    };
    auto count = [&](const std::string& s) {
      const long v = std::stol(s, &pos);
      if (pos != s.size() || v <= 0) throw std::invalid_argument(s);
      return static_cast<std::size_t>(v);
    };
    return make(num(parts[0]), num(parts[1]), num(parts[2]), num(parts[3]), count(parts[4]),
                count(parts[5]), units);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument("grid spec '" + spec + "': " + e.what());
  } catch (const std::out_of_range&) {
    throw std::invalid_argument("grid spec '" + spec + "': value out of range");
  }
}

void PhaseGrid::validate() const {
  if (np < 8 || nq < 8 || np % 2 != 0 || nq % 2 != 0)
    throw std::invalid_argument("grid sample counts must be even and >= 8 (got np=" +
                                std::to_string(np) + ", nq=" + std::to_string(nq) + ")");
  for (double v : {p_min, p_max, q_min, q_max})
    if (!std::isfinite(v)) throw std::invalid_argument("grid extents must be finite");
  if (!(p_min < p_max) || !(q_min < q_max))
    throw std::invalid_argument("grid extents must satisfy min < max");
}

std::string PhaseGrid::describe() const {
  return format_double(p_min) + "," + format_double(p_max) + "," + format_double(q_min) + "," +
         format_double(q_max) + "," + std::to_string(np) + "," + std::to_string(nq);
}

nlohmann::ordered_json PhaseGrid::to_json() const {
  nlohmann::ordered_json j;
  j["p_min"] = p_min;
  j["p_max"] = p_max;
  j["q_min"] = q_min;
  j["q_max"] = q_max;
  j["np"] = np;
  j["nq"] = nq;
  j["units"] = to_string(units);
  j["sampling"] = "cell-centred";
  return j;
}

ComplexField::ComplexField(PhaseGrid grid, cplx fill) : grid_(grid), values_(grid.size(), fill) {}

ComplexField::ComplexField(PhaseGrid grid, std::vector<cplx> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw std::invalid_argument("field value count does not match the grid");
}

ComplexField& ComplexField::operator+=(const ComplexField& o) {
  require_same_grid(*this, o, "field addition");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  return *this;
}

ComplexField& ComplexField::operator-=(const ComplexField& o) {
  require_same_grid(*this, o, "field subtraction");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  return *this;
}

ComplexField& ComplexField::operator*=(cplx s) {
  for (auto& v : values_) v *= s;
  return *this;
}

cplx ComplexField::integral() const {
  cplx s{0.0, 0.0};
  for (const auto& v : values_) s += v;
  return s * grid_.cell_area();
}

double ComplexField::l2_norm() const {
  double s = 0.0;
  for (const auto& v : values_) s += std::norm(v);
  return std::sqrt(s * grid_.cell_area());
}

double ComplexField::max_abs() const {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, std::abs(v));
  return m;
}

double ComplexField::max_abs_imag() const {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, std::abs(v.imag()));
  return m;
}

double ComplexField::min_real() const {
  double m = values_.empty() ? 0.0 : values_.front().real();
  for (const auto& v : values_) m = std::min(m, v.real());
  return m;
}

bool ComplexField::all_finite() const {
  return first_non_finite().first == grid_.np;
}

std::pair<std::size_t, std::size_t> ComplexField::first_non_finite() const {
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (!std::isfinite(values_[i].real()) || !std::isfinite(values_[i].imag()))
      return {i / grid_.nq, i % grid_.nq};
  return {grid_.np, grid_.nq};
}

ComplexField ComplexField::conj() const {
  ComplexField out(*this);
  for (auto& v : out.values_) v = std::conj(v);
  return out;
}

ComplexField ComplexField::real_part() const {
  ComplexField out(*this);
  for (auto& v : out.values_) v = {v.real(), 0.0};
  return out;
}

ComplexField operator+(ComplexField a, const ComplexField& b) { return a += b; }
ComplexField operator-(ComplexField a, const ComplexField& b) { return a -= b; }
ComplexField operator*(cplx s, ComplexField a) { return a *= s; }

void require_same_grid(const ComplexField& a, const ComplexField& b, const char* what) {
  if (!(a.grid() == b.grid()))
    throw std::invalid_argument(std::string(what) + ": fields live on different grids (" +
                                a.grid().describe() + " vs " + b.grid().describe() + ")");
}

double l2_distance(const ComplexField& a, const ComplexField& b) {
  require_same_grid(a, b, "l2_distance");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a.values()[i] - b.values()[i]);
  return std::sqrt(s * a.grid().cell_area());
}

double relative_l2(const ComplexField& a, const ComplexField& reference) {
  const double n = reference.l2_norm();
  return n > 0.0 ? l2_distance(a, reference) / n : l2_distance(a, reference);
}

ComplexField hadamard(const ComplexField& a, const ComplexField& b) {
  require_same_grid(a, b, "hadamard");
  ComplexField out(a);
  for (std::size_t i = 0; i < a.size(); ++i) out.values()[i] *= b.values()[i];
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_field_csv(std::ostream& os, const ComplexField& field, const FieldMetadata& meta) {
  const auto& g = field.grid();
  os << "# grid=" << g.describe() << "\n";
  os << "# units=" << to_string(g.units) << "\n";
  for (const auto& [k, v] : meta) os << "# " << k << "=" << v << "\n";
  os << "p,q,re,im\n";
  for (std::size_t ip = 0; ip < g.np; ++ip)
    for (std::size_t iq = 0; iq < g.nq; ++iq) {
      const cplx v = field.at(ip, iq);
      os << format_double(g.p(ip)) << ',' << format_double(g.q(iq)) << ','
         << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
    }
}

nlohmann::ordered_json field_to_json(const ComplexField& field, const FieldMetadata& meta) {
  nlohmann::ordered_json j;
  j["grid"] = field.grid().to_json();
  nlohmann::ordered_json m = nlohmann::ordered_json::object();
  for (const auto& [k, v] : meta) m[k] = v;
  j["meta"] = m;
  std::vector<double> re, im;
  re.reserve(field.size());
  im.reserve(field.size());
  for (const auto& v : field.values()) {
    re.push_back(v.real());
    im.push_back(v.imag());
  }
  j["layout"] = "row-major [ip][iq]";
  j["re"] = re;
  j["im"] = im;
  return j;
}

}  // namespace relwig
