#pragma once

// JSON state files:
//   {"lambda": x, "N": n, "C_plus": [[re,im],...], "C_minus": [...], "kernel_gamma": g}
// with optional N x N matrices "rho_plus", "rho_minus", "sigma_plus" (entries
// [re,im]) that replace the ones built from C (mixed or hand-edited states).

#include <cstddef>
#include <optional>
#include <string>

#include <json.hpp>

#include "relwig/state.hpp"

namespace relwig {

struct StateFile {
  double lambda = 0.0;
  std::size_t n = 0;
  ChargeStateVector state;
  CoefficientMatrices coeffs;
  double kernel_gamma = 0.0;
  bool explicit_matrices = false;
};

/// Throws std::invalid_argument naming the offending key.
StateFile parse_state_json(const nlohmann::json& j);
StateFile read_state_file(const std::string& path);

nlohmann::ordered_json state_to_json(const StateFile& s);
void write_state_file(const std::string& path, const StateFile& s);

/// Pure-state file for a ChargeStateVector.
StateFile make_state_file(double lambda, const ChargeStateVector& state, double kernel_gamma = 0.0);

}  // namespace relwig
