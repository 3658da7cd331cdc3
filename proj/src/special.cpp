#include "relwig/special.hpp"

#include <cmath>
#include <numbers>

namespace relwig {

double laguerre(unsigned k, unsigned alpha, double x) {
  const double a = alpha;
  double prev = 1.0;
  if (k == 0) return prev;
  double cur = 1.0 + a - x;
  for (unsigned n = 1; n < k; ++n) {
    const double next = ((2.0 * n + 1.0 + a - x) * cur - (n + a) * prev) / (n + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

double log_factorial(unsigned n) { return std::lgamma(static_cast<double>(n) + 1.0); }

void scaled_laguerre_family(unsigned d, double x, std::span<double> out) {
  if (out.empty()) return;
  double g0;
  if (x <= 0.0) {
    g0 = d == 0 ? 1.0 : 0.0;
  } else {
    g0 = std::exp(0.5 * d * std::log(x) - 0.5 * x - 0.5 * log_factorial(d));
  }
  out[0] = g0;
  if (out.size() == 1) return;
  const double dd = d;
  // g_{m+1} = ((2m+d+1-x) g_m - sqrt(m(m+d)) g_{m-1}) / sqrt((m+1)(m+d+1))
  double prev = 0.0, cur = g0;
  for (std::size_t m = 0; m + 1 < out.size(); ++m) {
    const double md = static_cast<double>(m);
    const double next = ((2.0 * md + dd + 1.0 - x) * cur - std::sqrt(md * (md + dd)) * prev) /
                        std::sqrt((md + 1.0) * (md + dd + 1.0));
    prev = cur;
    cur = next;
    out[m + 1] = cur;
  }
}

void hermite_functions(double x, std::span<double> out) {
  if (out.empty()) return;
  out[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
  if (out.size() == 1) return;
  out[1] = std::sqrt(2.0) * x * out[0];
  for (std::size_t n = 1; n + 1 < out.size(); ++n) {
    const double nn = static_cast<double>(n);
    out[n + 1] = std::sqrt(2.0 / (nn + 1.0)) * x * out[n] - std::sqrt(nn / (nn + 1.0)) * out[n - 1];
  }
}

}  // namespace relwig
