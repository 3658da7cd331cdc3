#include "relwig/figures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "relwig/basis.hpp"
#include "relwig/spectra.hpp"
#include "relwig/star.hpp"
#include "relwig/state_io.hpp"

namespace relwig {
namespace {

using ojson = nlohmann::ordered_json;

std::string fd(double v) { return format_double(v); }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, sep);) parts.push_back(item);
  return parts;
}

std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

ojson json_or_null(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

FieldMetadata field_meta(const std::string& panel, double lambda, std::size_t n, const PhaseGrid& g) {
  FieldMetadata m{{"panel", panel}, {"lambda", fd(lambda)}, {"basis_size", std::to_string(n)},
                  {"grid", g.describe()}, {"units", to_string(g.units)}};
  if (g.units == UnitsTag::FreeParticle) {
    m.emplace_back("p_unit", "mc");
    m.emplace_back("q_unit", "hbar/mc");
  } else {
    m.emplace_back("p_unit", "dimensionless");
    m.emplace_back("q_unit", "dimensionless");
  }
  return m;
}

void check(CommandResult& r, bool ok, const std::string& what) {
  if (!ok) r.violations.push_back(what);
}

ojson violations_json(const CommandResult& r) {
  ojson v = ojson::array();
  for (const auto& s : r.violations) v.push_back(s);
  return v;
}

void finish(CommandResult& r, OutputSink& out, const std::string& name) {
  r.report["violations"] = violations_json(r);
  r.report["ok"] = r.ok();
  ojson files = ojson::array();
  for (const auto& f : out.written()) files.push_back(f);
  files.push_back(name);
  r.report["outputs"] = files;
  out.json(name, r.report);
}

bool symmetric_square(const PhaseGrid& g) {
  auto near = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); };
  return g.np == g.nq && near(g.p_min, -g.p_max) && near(g.q_min, -g.q_max) && near(g.p_min, g.q_min);
}

double half_width(const PhaseGrid& g) {
  return std::min({g.p_max, -g.p_min, g.q_max, -g.q_min});
}

CoefficientMatrices embed(const CoefficientMatrices& c, std::size_t n) {
  if (c.size() >= n) return c;
  CoefficientMatrices out = CoefficientMatrices::zero(n);
  const long k = static_cast<long>(c.size());
  out.even_plus.topLeftCorner(k, k) = c.even_plus;
  out.even_minus.topLeftCorner(k, k) = c.even_minus;
  out.odd_plus.topLeftCorner(k, k) = c.odd_plus;
  out.odd_minus.topLeftCorner(k, k) = c.odd_minus;
  return out;
}

CoefficientMatrices load_coefficients(const StateFile& s) {
  if (s.kernel_gamma > 0.0)
    return apply_decoherence(s.coeffs, DecoherenceKernel::gaussian(s.n, s.kernel_gamma));
  return s.coeffs;
}

double grid_mean(const ComplexField& even, Axis axis, unsigned k) {
  const auto& g = even.grid();
  double s = 0.0;
  for (std::size_t ip = 0; ip < g.np; ++ip)
    for (std::size_t iq = 0; iq < g.nq; ++iq) {
      const double x = axis == Axis::Position ? g.q(iq) : g.p(ip);
      s += std::pow(x, static_cast<int>(k)) * even.at(ip, iq).real();
    }
  return s * g.cell_area();
}

}  // namespace

// ---- output ----

OutputFormats OutputFormats::parse(const std::string& list) {
  OutputFormats f{false, false, false};
  for (const auto& raw : split(list, ',')) {
    const std::string item = strip(raw);
    if (item == "csv") f.csv = true;
    else if (item == "json") f.json = true;
    else if (item == "svg") f.svg = true;
    else throw std::invalid_argument("unknown output format '" + item + "' (expected csv, json, svg)");
  }
  if (!f.csv && !f.json && !f.svg) throw std::invalid_argument("format list is empty");
  return f;
}

std::string OutputFormats::describe() const {
  std::string s;
  for (auto [on, name] : {std::pair{csv, "csv"}, {json, "json"}, {svg, "svg"}})
    if (on) s += (s.empty() ? "" : ",") + std::string(name);
  return s;
}

OutputSink::OutputSink(std::filesystem::path dir, OutputFormats formats)
    : dir_(std::move(dir)), formats_(formats) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec || !std::filesystem::is_directory(dir_))
    throw std::runtime_error("output directory '" + dir_.string() + "' cannot be created");
  const auto probe = dir_ / ".relwig_write_probe";
  {
    std::ofstream t(probe);
    if (!t) throw std::runtime_error("output directory '" + dir_.string() + "' is not writable");
  }
  std::filesystem::remove(probe, ec);
}

void OutputSink::write_text(const std::string& name, const std::string& text) {
  const auto path = dir_ / name;
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write '" + path.string() + "'");
  os << text;
  if (!os) throw std::runtime_error("write failed for '" + path.string() + "'");
  written_.push_back(name);
}

void OutputSink::field(const std::string& stem, const ComplexField& f, const FieldMetadata& meta,
                       const std::string& title) {
  if (formats_.csv) {
    std::ostringstream os;
    write_field_csv(os, f, meta);
    write_text(stem + ".csv", os.str());
  }
  if (formats_.json) write_text(stem + ".json", field_to_json(f, meta).dump(1) + "\n");
  if (formats_.svg) {
    const auto& g = f.grid();
    std::vector<double> re(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) re[i] = f.values()[i].real();
    heatmap(stem, re, g.np, g.nq, {title, "q", "p", g.q_min, g.q_max, g.p_min, g.p_max});
  }
}

void OutputSink::table(const std::string& stem, const FieldMetadata& meta,
                       const std::vector<std::string>& header,
                       const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream os;
  for (const auto& [k, v] : meta) os << "# " << k << "=" << v << "\n";
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << "\n";
  }
  write_text(stem + ".csv", os.str());
}

void OutputSink::heatmap(const std::string& stem, std::span<const double> values, std::size_t rows,
                         std::size_t cols, const HeatmapSpec& spec) {
  write_text(stem + ".svg", render_heatmap_svg(values, rows, cols, spec));
}

void OutputSink::json(const std::string& name, const nlohmann::ordered_json& j) {
  write_text(name, j.dump(2) + "\n");
}

// ---- fig1 ----

SurfaceAxes SurfaceAxes::parse(const std::string& spec) {
  const auto parts = split(spec, ',');
  if (parts.size() != 6)
    throw std::invalid_argument("surface spec '" + spec + "' must have six fields: p1min,p1max,p2min,p2max,n1,n2");
  SurfaceAxes a;
  try {
    std::size_t pos = 0;
    auto num = [&](const std::string& s) {
      const double v = std::stod(s, &pos);
      if (pos != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
      return v;
    };
    auto count = [&](const std::string& s) {
      const long v = std::stol(s, &pos);
      if (pos != s.size() || v < 2) throw std::invalid_argument(s + " (need >= 2 samples)");
      return static_cast<std::size_t>(v);
    };
    a = {num(parts[0]), num(parts[1]), num(parts[2]), num(parts[3]), count(parts[4]), count(parts[5])};
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument("surface spec '" + spec + "': " + e.what());
  } catch (const std::out_of_range&) {
    throw std::invalid_argument("surface spec '" + spec + "': value out of range");
  }
  if (!(a.p1_min < a.p1_max && a.p2_min < a.p2_max))
    throw std::invalid_argument("surface spec '" + spec + "': ranges must be increasing");
  return a;
}

double SurfaceAxes::p1(std::size_t i) const {
  return p1_min + (p1_max - p1_min) * static_cast<double>(i) / static_cast<double>(n1 - 1);
}

double SurfaceAxes::p2(std::size_t j) const {
  return p2_min + (p2_max - p2_min) * static_cast<double>(j) / static_cast<double>(n2 - 1);
}

std::vector<double> epsilon_surface(const SurfaceAxes& axes) {
  std::vector<double> out(axes.n1 * axes.n2);
  for (std::size_t i = 0; i < axes.n1; ++i)
    for (std::size_t j = 0; j < axes.n2; ++j) out[i * axes.n2 + j] = epsilon_continuous(axes.p1(i), axes.p2(j));
  return out;
}

double epsilon_ridge_residual(const SurfaceAxes& axes, std::span<const double> eps) {
  const double h = std::min((axes.p1_max - axes.p1_min) / static_cast<double>(axes.n1 - 1),
                            (axes.p2_max - axes.p2_min) / static_cast<double>(axes.n2 - 1));
  double worst = 0.0;
  for (std::size_t i = 0; i < axes.n1; ++i)
    for (std::size_t j = 0; j < axes.n2; ++j)
      if (std::abs(std::abs(axes.p1(i)) - std::abs(axes.p2(j))) <= 1e-12 * h)
        worst = std::max(worst, std::abs(eps[i * axes.n2 + j] - 1.0));
  return worst;
}

bool monotone_away_from_diagonal(const Eigen::MatrixXd& eps) {
  const long n = eps.rows();
  for (long m = 0; m < n; ++m) {
    for (long k = m + 1; k + 1 < n; ++k)
      if (!(eps(m, k + 1) > eps(m, k))) return false;
    for (long k = m - 1; k > 0; --k)
      if (!(eps(m, k - 1) > eps(m, k))) return false;
  }
  return true;
}

Fig1System parse_fig1_system(const std::string& name) {
  if (name == "free") return Fig1System::FreeParticle;
  if (name == "rotator") return Fig1System::Rotator;
  if (name == "both") return Fig1System::Both;
  throw std::invalid_argument("unknown fig1 system '" + name + "' (expected free|rotator|both)");
}

CommandResult run_fig1(const Fig1Options& opts, OutputSink& out) {
  CommandResult r;
  r.report["command"] = "fig1";
  if (opts.system != Fig1System::Rotator) {
    const auto& a = opts.axes;
    const auto eps = epsilon_surface(a);
    const double ridge = epsilon_ridge_residual(a, eps);
    const double lo = *std::min_element(eps.begin(), eps.end());
    const double hi = *std::max_element(eps.begin(), eps.end());
    const FieldMetadata meta{{"quantity", "epsilon(p1,p2)"},
                             {"units", "FreeParticle"},
                             {"p_unit", "mc"},
                             {"axes", fd(a.p1_min) + "," + fd(a.p1_max) + "," + fd(a.p2_min) + "," +
                                          fd(a.p2_max) + "," + std::to_string(a.n1) + "," +
                                          std::to_string(a.n2)},
                             {"sampling", "node-inclusive"}};
    if (out.formats().csv) {
      std::vector<std::vector<std::string>> rows;
      rows.reserve(eps.size());
      for (std::size_t i = 0; i < a.n1; ++i)
        for (std::size_t j = 0; j < a.n2; ++j) rows.push_back({fd(a.p1(i)), fd(a.p2(j)), fd(eps[i * a.n2 + j])});
      out.table("fig1_free_epsilon", meta, {"p1", "p2", "epsilon"}, rows);
    }
    if (out.formats().json) {
      ojson j;
      ojson m = ojson::object();
      for (const auto& [k, v] : meta) m[k] = v;
      j["meta"] = m;
      j["layout"] = "row-major [i1][i2]";
      j["epsilon"] = eps;
      out.json("fig1_free_epsilon.json", j);
    }
    if (out.formats().svg)
      out.heatmap("fig1_free_epsilon", eps, a.n1, a.n2,
                  {"epsilon factor, free particle", "p2 [mc]", "p1 [mc]", a.p2_min, a.p2_max, a.p1_min, a.p1_max});
    ojson f;
    f["ridge_residual"] = ridge;
    f["min"] = lo;
    f["max"] = hi;
    r.report["free"] = f;
    check(r, ridge <= 1e-12, "free: epsilon differs from 1 on |p1| = |p2|");
    check(r, lo >= 1.0 - 1e-12, "free: epsilon below 1");
  }
  if (opts.system != Fig1System::FreeParticle) {
    const std::size_t n = opts.basis_size;
    if (n < 2) throw std::invalid_argument("fig1: basis size must be >= 2");
    const auto spec = rotator_spectrum(opts.lambda, n);
    const auto f = charge_factors(spec, n);
    const FieldMetadata meta{{"quantity", "epsilon(m,n), chi(m,n)"},
                             {"units", "RotatorDimensionless"},
                             {"lambda", fd(opts.lambda)},
                             {"basis_size", std::to_string(n)}};
    if (out.formats().csv) {
      std::vector<std::vector<std::string>> rows;
      for (std::size_t m = 0; m < n; ++m)
        for (std::size_t k = 0; k < n; ++k)
          rows.push_back({std::to_string(m), std::to_string(k), fd(f.even(m, k)), fd(f.odd(m, k))});
      out.table("fig1_rotator_epsilon", meta, {"m", "n", "epsilon", "chi"}, rows);
    }
    std::vector<double> flat(n * n);
    for (std::size_t m = 0; m < n; ++m)
      for (std::size_t k = 0; k < n; ++k) flat[m * n + k] = f.even(m, k);
    if (out.formats().json) {
      ojson j;
      ojson m = ojson::object();
      for (const auto& [k, v] : meta) m[k] = v;
      j["meta"] = m;
      j["layout"] = "row-major [m][n]";
      j["epsilon"] = flat;
      out.json("fig1_rotator_epsilon.json", j);
    }
    if (out.formats().svg)
      out.heatmap("fig1_rotator_epsilon", flat, n, n,
                  {"epsilon factor, rotator lambda=" + fd(opts.lambda), "n", "m", 0.0,
                   static_cast<double>(n - 1), 0.0, static_cast<double>(n - 1)});
    double diag = 0.0, asym = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      diag = std::max(diag, std::abs(f.even(m, m) - 1.0));
      for (std::size_t k = 0; k < n; ++k) asym = std::max(asym, std::abs(f.even(m, k) - f.even(k, m)));
    }
    Eigen::Index im = 0, ik = 0;
    const double peak = f.even.maxCoeff(&im, &ik);
    const bool monotone = monotone_away_from_diagonal(f.even);
    ojson rj;
    rj["lambda"] = opts.lambda;
    rj["basis_size"] = n;
    rj["epsilon_0_2"] = n > 2 ? ojson(f.even(0, 2)) : ojson(nullptr);
    rj["max"] = peak;
    rj["argmax"] = {std::min(im, ik), std::max(im, ik)};
    rj["monotone_away_from_diagonal"] = monotone;
    rj["diagonal_residual"] = diag;
    rj["asymmetry"] = asym;
    r.report["rotator"] = rj;
    check(r, diag == 0.0, "rotator: epsilon diagonal differs from 1");
    check(r, asym == 0.0, "rotator: epsilon not symmetric");
    check(r, monotone, "rotator: epsilon not monotone away from the diagonal");
  }
  finish(r, out, "fig1_report.json");
  return r;
}

// ---- fig2 ----

const char* to_string(Fig2Variant v) {
  switch (v) {
    case Fig2Variant::Mixed: return "mixed";
    case Fig2Variant::NonlocalSuperposition: return "nonlocal";
    case Fig2Variant::StandardSuperposition: return "standard";
  }
  return "?";
}

PhaseGrid fig2_default_grid() { return PhaseGrid::square(5.0, 256); }

Fig2Panels fig2_panels(double lambda, const PhaseGrid& grid) {
  constexpr std::size_t n = 3;
  const auto spec = rotator_spectrum(lambda, n);
  const auto standard = charge_factors(spec, n);
  const auto nonlocal = nonlocal_factors(n);
  const auto mixture = CoefficientMatrices::mixture(
      {{0.5, ChargeStateVector::eigenstate(n, 0)}, {0.5, ChargeStateVector::eigenstate(n, 2)}});
  const auto super = CoefficientMatrices::from_state(ChargeStateVector::superposition(n, {{0, 1.0}, {2, 1.0}}));

  Fig2Panels out;
  out.mixed = assemble_wigner(mixture, standard, grid).total();
  out.nonlocal = assemble_wigner(super, nonlocal, grid).total();
  out.standard = assemble_wigner(super, standard, grid).total();
  out.difference = out.standard - out.nonlocal;
  out.epsilon02 = standard.even(0, 2);

  const ComplexField i_nl = out.nonlocal - out.mixed;
  const ComplexField i_std = out.standard - out.mixed;
  cplx num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < i_nl.size(); ++i) {
    num += std::conj(i_nl.values()[i]) * i_std.values()[i];
    den += std::norm(i_nl.values()[i]);
  }
  out.amplitude_ratio = den > 0.0 ? num.real() / den : NAN;
  for (std::size_t i = 0; i < i_nl.size(); ++i)
    out.support_residual = std::max(
        out.support_residual, std::abs(out.difference.values()[i] - (out.epsilon02 - 1.0) * i_nl.values()[i]));

  out.mixed_rotation = NAN;
  if (symmetric_square(grid)) {
    double worst = 0.0;
    const std::size_t m = grid.np;
    for (std::size_t ip = 0; ip < m; ++ip)
      for (std::size_t iq = 0; iq < m; ++iq)
        worst = std::max(worst, std::abs(out.mixed.at(ip, iq) - out.mixed.at(m - 1 - iq, ip)));
    out.mixed_rotation = worst;
  }
  ComplexField radial = diagonal_wigner(0, grid) + diagonal_wigner(2, grid);
  radial *= 0.5;
  for (std::size_t i = 0; i < radial.size(); ++i)
    out.mixed_radial = std::max(out.mixed_radial, std::abs(out.mixed.values()[i] - radial.values()[i]));

  const ComplexField* panels[3] = {&out.mixed, &out.nonlocal, &out.standard};
  for (int k = 0; k < 3; ++k) {
    out.normalization[k] = std::abs(panels[k]->integral() - 1.0);
    out.max_imag = std::max(out.max_imag, panels[k]->max_abs_imag());
  }
  return out;
}

CommandResult run_fig2(const Fig2Options& opts, OutputSink& out) {
  if (opts.grid.units != UnitsTag::RotatorDimensionless)
    throw std::invalid_argument("fig2: grid must use rotator units");
  CommandResult r;
  const Fig2Panels p = fig2_panels(opts.lambda, opts.grid);
  const std::string lam = "lambda=" + fd(opts.lambda);
  out.field("fig2_mixed", p.mixed, field_meta("mixed 1/2(|0><0|+|2><2|)", opts.lambda, 3, opts.grid),
            "W mixed, " + lam);
  out.field("fig2_nonlocal", p.nonlocal,
            field_meta("superposition (|0>+|2>)/sqrt2, nonlocal", opts.lambda, 3, opts.grid),
            "W nonlocal superposition, " + lam);
  out.field("fig2_standard", p.standard,
            field_meta("superposition (|0>+|2>)/sqrt2, standard", opts.lambda, 3, opts.grid),
            "W standard superposition, " + lam);
  out.field("fig2_difference", p.difference,
            field_meta("standard - nonlocal", opts.lambda, 3, opts.grid), "W standard - nonlocal, " + lam);

  r.report["command"] = "fig2";
  r.report["lambda"] = opts.lambda;
  r.report["basis_size"] = 3;
  r.report["grid"] = opts.grid.to_json();
  r.report["epsilon_0_2"] = p.epsilon02;
  r.report["amplitude_ratio"] = json_or_null(p.amplitude_ratio);
  r.report["amplitude_ratio_error"] = json_or_null(std::abs(p.amplitude_ratio - p.epsilon02));
  r.report["difference_support_residual"] = p.support_residual;
  r.report["mixed_rotation_residual"] = json_or_null(p.mixed_rotation);
  r.report["mixed_radial_residual"] = p.mixed_radial;
  r.report["normalization_residual"] = {{"mixed", p.normalization[0]},
                                        {"nonlocal", p.normalization[1]},
                                        {"standard", p.normalization[2]}};
  r.report["max_imag"] = p.max_imag;

  check(r, std::abs(p.amplitude_ratio - p.epsilon02) <= 1e-6, "interference amplitude ratio differs from epsilon(0,2)");
  check(r, p.support_residual <= 1e-10, "difference map not confined to the (0,2) interference term");
  check(r, std::isnan(p.mixed_rotation) || p.mixed_rotation <= 1e-8, "mixed panel not rotationally symmetric");
  check(r, p.mixed_radial <= 1e-8, "mixed panel differs from its radial closed form");
  for (int k = 0; k < 3; ++k)
    check(r, p.normalization[k] <= 1e-6,
          std::string(to_string(static_cast<Fig2Variant>(k))) + " panel not normalised to 1e-6 on this grid");
  check(r, p.max_imag <= 1e-10, "panels not real");
  finish(r, out, "fig2_report.json");
  return r;
}

// ---- fig3 ----

PhaseGrid fig3_default_grid() { return PhaseGrid::make(-40.0, 40.0, -1.0, 1.0, 512, 512, UnitsTag::FreeParticle); }

Fig3Fields fig3_fields(double delta_p, double p0, const PhaseGrid& grid) {
  if (!(delta_p > 0.0) || !std::isfinite(delta_p)) throw std::invalid_argument("fig3: packet width must be > 0");
  const auto psi = gaussian_momentum_state(grid, delta_p, p0);
  Fig3Fields out;
  out.epsilon = free_wigner_pair(psi, grid, WignerKernel::Epsilon);
  out.unit = free_wigner_pair(psi, grid, WignerKernel::Unit);
  out.min_epsilon = out.epsilon.min_real();
  out.min_unit = out.unit.min_real();
  out.max_imag = out.epsilon.max_abs_imag();
  out.integral = out.epsilon.integral().real();

  double abs_mass = 0.0, abs_q2 = 0.0, signed_mass = 0.0, signed_q2 = 0.0;
  for (std::size_t iq = 0; iq < grid.nq; ++iq) {
    double a = 0.0, s = 0.0;
    for (std::size_t ip = 0; ip < grid.np; ++ip) {
      const double w = out.epsilon.at(ip, iq).real();
      a += std::abs(w);
      s += w;
    }
    const double q2 = grid.q(iq) * grid.q(iq);
    abs_mass += a;
    abs_q2 += a * q2;
    signed_mass += s;
    signed_q2 += s * q2;
  }
  out.width = abs_mass > 0.0 ? std::sqrt(abs_q2 / abs_mass) : 0.0;
  out.signed_variance = signed_mass != 0.0 ? signed_q2 / signed_mass : 0.0;
  return out;
}

CommandResult run_fig3(const Fig3Options& opts, OutputSink& out) {
  if (opts.grid.units != UnitsTag::FreeParticle) throw std::invalid_argument("fig3: grid must use free-particle units");
  const Fig3Fields f = fig3_fields(opts.delta_p, opts.p0, opts.grid);
  auto meta = [&](const char* kernel) {
    return FieldMetadata{{"panel", std::string("gaussian packet, kernel ") + kernel},
                         {"lambda", fd(opts.delta_p)},
                         {"delta_p", fd(opts.delta_p)},
                         {"p0", fd(opts.p0)},
                         {"grid", opts.grid.describe()},
                         {"units", "FreeParticle"},
                         {"p_unit", "mc"},
                         {"q_unit", "hbar/mc"}};
  };
  out.field("fig3_epsilon", f.epsilon, meta("epsilon"), "W epsilon kernel, dp=" + fd(opts.delta_p) + " mc");
  out.field("fig3_unit", f.unit, meta("unit"), "W unit kernel, dp=" + fd(opts.delta_p) + " mc");

  CommandResult r;
  const double unit_peak = f.unit.max_abs();
  r.report["command"] = "fig3";
  r.report["delta_p"] = opts.delta_p;
  r.report["p0"] = opts.p0;
  r.report["grid"] = opts.grid.to_json();
  r.report["min_value"] = f.min_epsilon;
  r.report["negative_lobes"] = f.min_epsilon < 0.0;
  r.report["min_unit"] = f.min_unit;
  r.report["localization_width"] = f.width;
  r.report["compton_over_delta_p"] = 1.0 / opts.delta_p;
  r.report["signed_q_variance"] = f.signed_variance;
  r.report["max_imag"] = f.max_imag;
  r.report["integral"] = f.integral;
  r.report["unit_integral"] = f.unit.integral().real();
  r.report["epsilon_vs_unit_relative_l2"] = relative_l2(f.epsilon, f.unit);

  check(r, f.max_imag <= 1e-10 * std::max(1.0, unit_peak), "epsilon field not real");
  // truncating psi at the p-range edges leaves ripples of order psi(edge) psi(edge/2)
  check(r, f.min_unit >= -1e-6 * unit_peak, "unit-kernel field of a Gaussian is not positive");
  check(r, std::abs(f.unit.integral().real() - 1.0) <= 1e-6, "unit field not normalised on this grid");
  finish(r, out, "fig3_report.json");
  return r;
}

// ---- evolve ----

SymbolField tapered_rotator_hamiltonian(double lambda, const PhaseGrid& grid) {
  const double half = half_width(grid);
  if (!(half > 0.0)) throw std::invalid_argument("evolve: grid must contain the origin");
  HamiltonianOptions o;
  o.taper_inner = 0.6 * half;
  o.taper_outer = 0.9 * half;
  auto h = rotator_hamiltonian_symbol(lambda, grid, o);
  if (!h.report.converged)
    throw std::runtime_error("evolve: Hamiltonian symbol did not converge at " +
                             std::to_string(h.report.failures) + " radii");
  return h.symbol;
}

CommandResult run_evolve(const EvolveOptions& opts, OutputSink& out) {
  const StateFile file = read_state_file(opts.state_file);
  CoefficientMatrices coeffs = load_coefficients(file);
  coeffs.validate();
  const std::size_t n = std::max(file.n, static_cast<std::size_t>(opts.power) + 1);
  coeffs = embed(coeffs, n);
  const auto spectrum = rotator_spectrum(file.lambda, n);
  const auto factors = opts.nonlocal ? nonlocal_factors(n) : charge_factors(spectrum, n);

  EvolutionPlan plan;
  plan.method = opts.method;
  plan.dt = opts.dt;
  plan.t_final = opts.t_final;
  plan.validate();
  const std::size_t steps = plan.steps();
  const double step = steps ? opts.t_final / static_cast<double>(steps) : 0.0;

  CommandResult r;
  r.report["command"] = "evolve";
  r.report["state_file"] = std::filesystem::path(opts.state_file).filename().string();
  r.report["lambda"] = file.lambda;
  r.report["basis_size"] = file.n;
  r.report["mode"] = opts.nonlocal ? "nonlocal" : "standard";
  r.report["method"] = opts.method == EvolutionPlan::Method::Spectral ? "spectral" : "rk4";
  r.report["dt"] = opts.dt;
  r.report["step"] = step;
  r.report["steps"] = steps;
  r.report["t_final"] = opts.t_final;
  r.report["time_unit"] = "hbar/mc^2";
  r.report["observable"] = {{"axis", to_string(opts.axis)}, {"power", opts.power}};

  std::vector<double> times(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) times[k] = step * static_cast<double>(k);
  // one trajectory per occupied charge branch
  std::vector<Branch> branches;
  for (Branch b : {Branch::Plus, Branch::Minus})
    if (coeffs.even(b).cwiseAbs().maxCoeff() > 0.0) branches.push_back(b);
  std::vector<std::vector<double>> series(branches.size(), std::vector<double>(steps + 1));

  if (opts.method == EvolutionPlan::Method::Spectral) {
    for (std::size_t i = 0; i < branches.size(); ++i) {
      CoefficientMatrices only = coeffs;
      (branches[i] == Branch::Plus ? only.even_minus : only.even_plus).setZero();
      series[i] = means_timeseries(only, factors, spectrum, opts.axis, opts.power, times);
    }
  } else {
    const PhaseGrid grid = opts.grid.value_or(PhaseGrid::square(10.0, 96));
    const auto w0 = assemble_wigner(coeffs, factors, grid);
    const SymbolField h = tapered_rotator_hamiltonian(file.lambda, grid);
    const auto meta = field_meta("even part W[+] + W[-]", file.lambda, file.n, grid);
    const auto res = evolve_grid(w0, h, plan, [&](std::size_t s, double, const WignerComponents& w) {
      for (std::size_t i = 0; i < branches.size(); ++i)
        series[i][s] = grid_mean(branches[i] == Branch::Plus ? w.even_plus : w.even_minus, opts.axis, opts.power);
      if (opts.frame_every > 0 && s % opts.frame_every == 0) {
        char name[32];
        std::snprintf(name, sizeof name, "frame_%06zu", s);
        FieldMetadata m = meta;
        m.emplace_back("t", fd(times[s]));
        out.field(name, w.even_plus + w.even_minus, m, "even part, t=" + fd(times[s]));
      }
    });
    r.report["grid"] = grid.to_json();
    r.report["hamiltonian_taper"] = {{"inner", 0.6 * half_width(grid)}, {"outer", 0.9 * half_width(grid)}};
    r.report["diagnostics"] = {{"max_abs_energy", res.diag.max_abs_energy},
                               {"even_norm_drift", res.diag.even_norm_drift},
                               {"max_even_imag", res.diag.max_even_imag}};
    check(r, res.diag.even_norm_drift <= 1e-6, "even-part norm drifted by more than 1e-6");
    check(r, res.diag.max_even_imag <= 1e-8, "even parts acquired an imaginary part");
  }

  std::vector<double> means(steps + 1, 0.0);
  std::vector<std::vector<std::string>> rows;
  bool finite = true;
  for (std::size_t k = 0; k <= steps; ++k)
    for (std::size_t i = 0; i < branches.size(); ++i) {
      finite = finite && std::isfinite(series[i][k]);
      means[k] += series[i][k];
      rows.push_back({fd(times[k]), fd(series[i][k]), branches[i] == Branch::Plus ? "plus" : "minus"});
    }
  check(r, finite, "trajectory contains non-finite values");
  const std::string observable = std::string(opts.axis == Axis::Position ? "q" : "p") + "^" + std::to_string(opts.power);
  out.table("trajectory",
            {{"observable", observable}, {"lambda", fd(file.lambda)}, {"basis_size", std::to_string(file.n)},
             {"method", r.report["method"].get<std::string>()}, {"mode", r.report["mode"].get<std::string>()},
             {"time_unit", "hbar/mc^2"}},
            {"t", "mean", "branch"}, rows);

  ojson freq;
  if (steps >= 2 && finite) {
    const auto est = dominant_frequency(means, step);
    freq["omega"] = est.omega;
    freq["bin_width"] = est.bin_width;
    freq["amplitude"] = est.amplitude;
  }
  ojson lines = ojson::array();
  for (std::size_t a = 0; a < file.n; ++a)
    for (std::size_t b = a + 1; b < file.n; ++b)
      if (std::abs(coeffs.even_plus(a, b)) + std::abs(coeffs.even_minus(a, b)) > 1e-12)
        lines.push_back({{"m", a}, {"n", b}, {"omega", std::abs(interference_frequency(spectrum, b, a))}});
  freq["interference_lines"] = lines;
  r.report["frequency"] = freq;
  finish(r, out, "manifest.json");
  return r;
}

// ---- validate ----

PhaseGrid validation_grid(std::size_t n) {
  const double reach = std::sqrt(2.0 * static_cast<double>(n) + 1.0);
  const double half = reach + 5.0;
  const double dx = std::numbers::pi / (4.0 * reach);
  std::size_t count = static_cast<std::size_t>(std::ceil(2.0 * half / dx));
  count += count % 2;
  count = std::clamp<std::size_t>(count, 64, 512);
  return PhaseGrid::square(half, count);
}

CommandResult run_validate(const ValidateOptions& opts, OutputSink& out) {
  const StateFile file = read_state_file(opts.state_file);
  const CoefficientMatrices coeffs = load_coefficients(file);
  const std::size_t n = file.n;
  const auto spectrum = rotator_spectrum(file.lambda, n);
  const auto factors = opts.nonlocal ? nonlocal_factors(n) : charge_factors(spectrum, n);
  const PhaseGrid grid = opts.grid.value_or(validation_grid(n));

  const double norm = coeffs.trace();
  const double structure = coeffs.structure_residual();
  const auto purity = purity_criterium(coeffs, factors);
  const double even_odd = even_odd_constraint(coeffs);
  const bool vacuous = coeffs.even_plus.cwiseAbs().maxCoeff() == 0.0 ||
                       coeffs.even_minus.cwiseAbs().maxCoeff() == 0.0;
  const auto w = assemble_wigner(coeffs, factors, grid);
  const auto d = diagnose(w);
  const double norm_residual = std::abs(d.even_integral - 1.0);

  CommandResult r;
  r.report["command"] = "validate";
  r.report["state_file"] = std::filesystem::path(opts.state_file).filename().string();
  r.report["lambda"] = file.lambda;
  r.report["basis_size"] = n;
  r.report["mode"] = opts.nonlocal ? "nonlocal" : "standard";
  r.report["kernel_gamma"] = file.kernel_gamma;
  r.report["explicit_matrices"] = file.explicit_matrices;
  r.report["norm"] = norm;
  r.report["norm_residual"] = std::abs(norm - 1.0);
  r.report["structure_residual"] = structure;
  r.report["purity"] = {{"is_pure", purity.is_pure},
                        {"max_minor", purity.max_minor},
                        {"odd_is_pure", purity.odd_is_pure},
                        {"odd_max_minor", purity.odd_max_minor}};
  r.report["even_odd_constraint"] = {{"violation", even_odd}, {"vacuous", vacuous}};
  r.report["reality"] = {{"even_imag", d.even_imag}, {"odd_conjugacy", d.conjugacy}};
  r.report["normalization"] = {{"grid", grid.to_json()},
                               {"even_integral", d.even_integral},
                               {"even_residual", norm_residual},
                               {"odd_integral", d.odd_integral}};
  r.report["min_even"] = d.min_even;
  ojson warn = ojson::array();
  for (const auto& s : w.warnings) warn.push_back(s);
  r.report["warnings"] = warn;

  check(r, std::abs(norm - 1.0) <= 1e-8, "state norm differs from 1");
  check(r, structure <= 1e-10, "coefficient matrices break Hermiticity or odd conjugacy");
  check(r, d.even_imag <= 1e-10, "even Wigner parts not real");
  check(r, d.conjugacy <= 1e-10, "odd Wigner parts not conjugate to each other");
  check(r, norm_residual <= 1e-6, "Wigner function not normalised on the validation grid");
  check(r, d.odd_integral <= 1e-6, "odd parts do not integrate to zero");
  if (opts.require_pure) check(r, purity.is_pure, "state is not pure");
  finish(r, out, "validate_report.json");
  return r;
}

// ---- hamiltonian ----

CommandResult run_hamiltonian(const HamiltonianCommandOptions& opts, OutputSink& out) {
  if (!(opts.lambda >= 0.0) || !std::isfinite(opts.lambda))
    throw std::invalid_argument("hamiltonian: lambda must be finite and >= 0");
  const auto h = rotator_hamiltonian_symbol(opts.lambda, opts.grid, opts.series);
  const auto expansion = expansion_hamiltonian(opts.lambda, opts.grid, 3);
  auto meta = field_meta("Weyl symbol E(p,q) [mc^2]", opts.lambda, opts.series.max_terms, opts.grid);
  meta.emplace_back("acceleration", to_string(opts.series.accel));
  meta.emplace_back("tolerance", fd(opts.series.tolerance));
  out.field("hamiltonian", h.symbol.field, meta, "E(p,q), lambda=" + fd(opts.lambda));

  const auto& rep = h.report;
  CommandResult r;
  r.report["command"] = "hamiltonian";
  r.report["lambda"] = opts.lambda;
  r.report["grid"] = opts.grid.to_json();
  r.report["acceleration"] = to_string(opts.series.accel);
  r.report["tolerance"] = opts.series.tolerance;
  r.report["max_terms"] = opts.series.max_terms;
  r.report["taper"] = {{"inner", opts.series.taper_inner}, {"outer", opts.series.taper_outer}};
  r.report["convergence"] = {{"converged", rep.converged},
                             {"unique_radii", rep.unique_radii},
                             {"failures", rep.failures},
                             {"max_terms_used", rep.max_terms_used},
                             {"worst_delta", rep.worst_delta},
                             {"worst_p", rep.worst_p},
                             {"worst_q", rep.worst_q}};
  r.report["max_abs_minus_third_order_expansion"] = (h.symbol.field - expansion.field).max_abs();
  check(r, rep.converged, "spectral sum did not converge at " + std::to_string(rep.failures) + " radii");
  check(r, h.symbol.field.all_finite(), "symbol contains non-finite values");
  finish(r, out, "hamiltonian_report.json");
  return r;
}

}  // namespace relwig
