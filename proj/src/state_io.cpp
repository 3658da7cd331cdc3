#include "relwig/state_io.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace relwig {
namespace {

using nlohmann::json;

cplx parse_complex(const json& v, const std::string& where) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  throw std::invalid_argument("state file: " + where + " must be [re, im]");
}

Eigen::VectorXcd parse_vector(const json& j, const char* key, std::size_t n) {
  if (!j.contains(key)) return Eigen::VectorXcd::Zero(static_cast<long>(n));
  const json& arr = j.at(key);
  if (!arr.is_array() || arr.size() != n)
    throw std::invalid_argument(std::string("state file: '") + key + "' must hold N = " +
                                std::to_string(n) + " entries");
  Eigen::VectorXcd v(static_cast<long>(n));
  for (std::size_t i = 0; i < n; ++i)
    v(static_cast<long>(i)) = parse_complex(arr[i], std::string(key) + "[" + std::to_string(i) + "]");
  return v;
}

std::optional<Eigen::MatrixXcd> parse_matrix(const json& j, const char* key, std::size_t n) {
  if (!j.contains(key)) return std::nullopt;
  const json& rows = j.at(key);
  if (!rows.is_array() || rows.size() != n)
    throw std::invalid_argument(std::string("state file: '") + key + "' must be N x N");
  Eigen::MatrixXcd m(static_cast<long>(n), static_cast<long>(n));
  for (std::size_t r = 0; r < n; ++r) {
    if (!rows[r].is_array() || rows[r].size() != n)
      throw std::invalid_argument(std::string("state file: '") + key + "' must be N x N");
    for (std::size_t c = 0; c < n; ++c)
      m(static_cast<long>(r), static_cast<long>(c)) = parse_complex(
          rows[r][c], std::string(key) + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
  }
  return m;
}

json complex_json(cplx v) { return json::array({v.real(), v.imag()}); }

json vector_json(const Eigen::VectorXcd& v) {
  json a = json::array();
  for (long i = 0; i < v.size(); ++i) a.push_back(complex_json(v(i)));
  return a;
}

json matrix_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (long r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (long c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

StateFile parse_state_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("state file: top level must be an object");
  for (const char* key : {"lambda", "N"})
    if (!j.contains(key)) throw std::invalid_argument(std::string("state file: missing '") + key + "'");
  StateFile s;
  if (!j.at("lambda").is_number()) throw std::invalid_argument("state file: 'lambda' must be a number");
  s.lambda = j.at("lambda").get<double>();
  if (!std::isfinite(s.lambda) || s.lambda < 0.0)
    throw std::invalid_argument("state file: 'lambda' must be finite and >= 0");
  if (!j.at("N").is_number_integer() || j.at("N").get<long long>() < 1)
    throw std::invalid_argument("state file: 'N' must be a positive integer");
  s.n = j.at("N").get<std::size_t>();
  if (!j.contains("C_plus") && !j.contains("rho_plus"))
    throw std::invalid_argument("state file: need 'C_plus' (or explicit 'rho_plus')");
  s.state.plus = parse_vector(j, "C_plus", s.n);
  s.state.minus = parse_vector(j, "C_minus", s.n);
  if (j.contains("kernel_gamma")) {
    if (!j.at("kernel_gamma").is_number())
      throw std::invalid_argument("state file: 'kernel_gamma' must be a number");
    s.kernel_gamma = j.at("kernel_gamma").get<double>();
    if (!(s.kernel_gamma >= 0.0)) throw std::invalid_argument("state file: 'kernel_gamma' must be >= 0");
  }
  s.coeffs = CoefficientMatrices::from_state(s.state);
  if (auto m = parse_matrix(j, "rho_plus", s.n)) s.coeffs.even_plus = *m, s.explicit_matrices = true;
  if (auto m = parse_matrix(j, "rho_minus", s.n)) s.coeffs.even_minus = *m, s.explicit_matrices = true;
  if (auto m = parse_matrix(j, "sigma_plus", s.n)) {
    s.coeffs.odd_plus = *m;
    s.coeffs.odd_minus = m->adjoint();
    s.explicit_matrices = true;
  }
  return s;
}

StateFile read_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open state file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("state file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_state_json(j);
}

nlohmann::ordered_json state_to_json(const StateFile& s) {
  nlohmann::ordered_json j;
  j["lambda"] = s.lambda;
  j["N"] = s.n;
  j["C_plus"] = vector_json(s.state.plus);
  j["C_minus"] = vector_json(s.state.minus);
  j["kernel_gamma"] = s.kernel_gamma;
  if (s.explicit_matrices) {
    j["rho_plus"] = matrix_json(s.coeffs.even_plus);
    j["rho_minus"] = matrix_json(s.coeffs.even_minus);
    j["sigma_plus"] = matrix_json(s.coeffs.odd_plus);
  }
  return j;
}

void write_state_file(const std::string& path, const StateFile& s) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write state file '" + path + "'");
  out << state_to_json(s).dump(2) << "\n";
}

StateFile make_state_file(double lambda, const ChargeStateVector& state, double kernel_gamma) {
  StateFile s;
  s.lambda = lambda;
  s.n = state.size();
  s.state = state;
  s.coeffs = CoefficientMatrices::from_state(state);
  s.kernel_gamma = kernel_gamma;
  return s;
}

}  // namespace relwig
