// relwig: figure data, evolution runs, state validation and Hamiltonian
// symbols for the charge-invariant Wigner function.
//
// Exit status: 0 success, 1 invariant violation or numerical failure,
// 2 usage or configuration error.

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <string>

#include "relwig/config.hpp"
#include "relwig/figures.hpp"

namespace {

using namespace relwig;

constexpr int exit_violation = 1;
constexpr int exit_usage = 2;

/// CLI value if given, else config value, else empty.
class Settings {
 public:
  void bind(CLI::App* cmd, const std::string& key, const std::string& help) {
    auto* opt = cmd->add_option("--" + flag(key), cli_[key], help);
    opts_[key] = opt;
  }
  void bind_flag(CLI::App* cmd, const std::string& key, const std::string& help) {
    opts_[key] = cmd->add_flag("--" + flag(key), help);
  }
  void load(const Config& c) { config_ = c; }

  std::optional<std::string> raw(const std::string& key) const {
    auto it = opts_.find(key);
    if (it != opts_.end() && it->second->count() > 0) {
      auto c = cli_.find(key);
      return c != cli_.end() ? c->second : std::string("true");
    }
    return config_.get(key);
  }
  std::string str(const std::string& key, const std::string& fallback) const {
    return raw(key).value_or(fallback);
  }
  double real(const std::string& key, double fallback) const {
    auto v = raw(key);
    if (!v) return fallback;
    std::size_t used = 0;
    double d = 0.0;
    try {
      d = std::stod(*v, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != v->size() || !std::isfinite(d))
      throw std::invalid_argument("--" + flag(key) + ": expected a finite number, got '" + *v + "'");
    return d;
  }
  std::size_t count(const std::string& key, std::size_t fallback) const {
    auto v = raw(key);
    if (!v) return fallback;
    std::size_t used = 0;
    long long n = -1;
    try {
      n = std::stoll(*v, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != v->size() || n < 0)
      throw std::invalid_argument("--" + flag(key) + ": expected a non-negative integer, got '" + *v + "'");
    return static_cast<std::size_t>(n);
  }
  bool boolean(const std::string& key) const {
    auto v = raw(key);
    if (!v) return false;
    if (*v == "true" || *v == "1" || *v == "yes") return true;
    if (*v == "false" || *v == "0" || *v == "no") return false;
    throw std::invalid_argument("'" + key + "': expected true|false, got '" + *v + "'");
  }
  const std::map<std::string, CLI::Option*>& options() const { return opts_; }

  static std::string flag(std::string key) {
    for (char& c : key)
      if (c == '_') c = '-';
    return key;
  }

 private:
  std::map<std::string, std::string> cli_;
  std::map<std::string, CLI::Option*> opts_;
  Config config_;
};

struct Command {
  CLI::App* app = nullptr;
  Settings settings;
};

void add_common(Command& c) {
  c.settings.bind(c.app, "out", "output directory (default: out)");
  c.settings.bind(c.app, "format", "comma-separated output formats: csv,json,svg (default: csv)");
  c.settings.bind(c.app, "config", "flat key = value file; command-line flags take precedence");
}

bool nonlocal_mode(const Settings& s) {
  const std::string m = s.str("mode", "standard");
  if (m == "standard") return false;
  if (m == "nonlocal") return true;
  throw std::invalid_argument("--mode: expected standard|nonlocal, got '" + m + "'");
}

std::optional<PhaseGrid> grid_option(const Settings& s, UnitsTag units) {
  auto g = s.raw("grid");
  if (!g) return std::nullopt;
  return PhaseGrid::parse(*g, units);
}

std::string require_state(const Settings& s) {
  auto path = s.raw("state");
  if (!path) throw std::invalid_argument("a state file is required (--state FILE)");
  if (!std::filesystem::is_regular_file(*path))
    throw std::invalid_argument("state file '" + *path + "' does not exist or is not a file");
  return *path;
}

CommandResult dispatch(const std::string& name, const Settings& s) {
  OutputSink out(s.str("out", "out"), OutputFormats::parse(s.str("format", "csv")));
  if (name == "fig1") {
    Fig1Options o;
    o.system = parse_fig1_system(s.str("system", "both"));
    o.lambda = s.real("lambda", o.lambda);
    o.basis_size = s.count("basis_size", o.basis_size);
    if (auto g = s.raw("grid")) o.axes = SurfaceAxes::parse(*g);
    return run_fig1(o, out);
  }
  if (name == "fig2") {
    Fig2Options o;
    o.lambda = s.real("lambda", o.lambda);
    if (auto g = grid_option(s, UnitsTag::RotatorDimensionless)) o.grid = *g;
    return run_fig2(o, out);
  }
  if (name == "fig3") {
    Fig3Options o;
    o.delta_p = s.real("lambda", o.delta_p);
    o.p0 = s.real("p0", o.p0);
    if (auto g = grid_option(s, UnitsTag::FreeParticle)) o.grid = *g;
    return run_fig3(o, out);
  }
  if (name == "evolve") {
    EvolveOptions o;
    o.state_file = require_state(s);
    const std::string method = s.str("method", "spectral");
    if (method == "spectral") o.method = EvolutionPlan::Method::Spectral;
    else if (method == "rk4") o.method = EvolutionPlan::Method::GridRK4;
    else throw std::invalid_argument("--method: expected spectral|rk4, got '" + method + "'");
    o.dt = s.real("dt", o.dt);
    o.t_final = s.real("t_final", o.t_final);
    o.axis = parse_axis(s.str("observable", "position"));
    o.power = static_cast<unsigned>(s.count("power", o.power));
    o.nonlocal = nonlocal_mode(s);
    o.grid = grid_option(s, UnitsTag::RotatorDimensionless);
    o.frame_every = s.count("frame_every", 0);
    return run_evolve(o, out);
  }
  if (name == "validate") {
    ValidateOptions o;
    o.state_file = require_state(s);
    o.nonlocal = nonlocal_mode(s);
    o.require_pure = s.boolean("require_pure");
    o.grid = grid_option(s, UnitsTag::RotatorDimensionless);
    return run_validate(o, out);
  }
  HamiltonianCommandOptions o;
  o.lambda = s.real("lambda", o.lambda);
  if (auto g = grid_option(s, UnitsTag::RotatorDimensionless)) o.grid = *g;
  o.series.max_terms = s.count("basis_size", o.series.max_terms);
  o.series.accel = parse_acceleration(s.str("accel", "euler").c_str());
  o.series.tolerance = s.real("tolerance", o.series.tolerance);
  o.series.cesaro_order = static_cast<unsigned>(s.count("cesaro_order", o.series.cesaro_order));
  o.series.taper_inner = s.real("taper_inner", 0.0);
  o.series.taper_outer = s.real("taper_outer", 0.0);
  return run_hamiltonian(o, out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"relwig: charge-invariant Wigner functions of the relativistic rotator and free particle"};
  app.require_subcommand(1);
  std::map<std::string, Command> cmds;
  auto make = [&](const std::string& name, const std::string& help) -> Command& {
    Command& c = cmds[name];
    c.app = app.add_subcommand(name, help);
    add_common(c);
    return c;
  };

  {
    auto& c = make("fig1", "epsilon factor: free-particle surface and rotator matrix");
    c.settings.bind(c.app, "system", "free|rotator|both (default: both)");
    c.settings.bind(c.app, "lambda", "rotator coupling (default: 10)");
    c.settings.bind(c.app, "basis_size", "rotator matrix size N (default: 20)");
    c.settings.bind(c.app, "grid", "free surface p1min,p1max,p2min,p2max,n1,n2 (default: -5,5,-5,5,201,201)");
  }
  {
    auto& c = make("fig2", "rotator Wigner panels: mixture, nonlocal and standard superposition");
    c.settings.bind(c.app, "lambda", "rotator coupling (default: 10)");
    c.settings.bind(c.app, "grid", "pmin,pmax,qmin,qmax,np,nq (default: -5,5,-5,5,256,256)");
  }
  {
    auto& c = make("fig3", "free Gaussian packet, epsilon and unit kernels");
    c.settings.bind(c.app, "lambda", "momentum width in mc, i.e. Compton wavelength over packet width (default: 8)");
    c.settings.bind(c.app, "p0", "mean momentum in mc (default: 0)");
    c.settings.bind(c.app, "grid", "pmin,pmax,qmin,qmax,np,nq in mc and hbar/mc (default: -40,40,-1,1,512,512)");
  }
  {
    auto& c = make("evolve", "time evolution of a state file");
    c.settings.bind(c.app, "state", "state file (JSON)");
    c.settings.bind(c.app, "method", "spectral|rk4 (default: spectral)");
    c.settings.bind(c.app, "dt", "time step in hbar/mc^2 (default: 1e-3)");
    c.settings.bind(c.app, "t_final", "final time in hbar/mc^2 (default: 1)");
    c.settings.bind(c.app, "observable", "position|momentum (default: position)");
    c.settings.bind(c.app, "power", "moment order k of the observable (default: 2)");
    c.settings.bind(c.app, "mode", "standard|nonlocal (default: standard)");
    c.settings.bind(c.app, "grid", "rk4 grid (default: -10,10,-10,10,96,96)");
    c.settings.bind(c.app, "frame_every", "rk4: dump the even part every k steps (default: 0, off)");
  }
  {
    auto& c = make("validate", "consistency report for a state file");
    c.settings.bind(c.app, "state", "state file (JSON)");
    c.settings.bind(c.app, "mode", "standard|nonlocal (default: standard)");
    c.settings.bind(c.app, "grid", "normalisation grid (default: sized from N)");
    c.settings.bind_flag(c.app, "require_pure", "treat a mixed state as a violation");
  }
  {
    auto& c = make("hamiltonian", "Weyl symbol of the rotator Hamiltonian");
    c.settings.bind(c.app, "lambda", "rotator coupling (default: 1)");
    c.settings.bind(c.app, "grid", "pmin,pmax,qmin,qmax,np,nq (default: -5,5,-5,5,128,128)");
    c.settings.bind(c.app, "basis_size", "maximum spectral terms (default: 2048)");
    c.settings.bind(c.app, "accel", "euler|cesaro (default: euler)");
    c.settings.bind(c.app, "tolerance", "Cauchy tolerance (default: 1e-10)");
    c.settings.bind(c.app, "cesaro_order", "Cesaro iteration order (default: 2)");
    c.settings.bind(c.app, "taper_inner", "far-field taper start radius (default: 0, off)");
    c.settings.bind(c.app, "taper_outer", "far-field taper end radius (default: 0, off)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_usage;
  }

  for (auto& [name, cmd] : cmds) {
    if (!cmd.app->parsed()) continue;
    try {
      if (auto path = cmd.settings.raw("config")) {
        const Config cfg = Config::load(*path);
        for (const auto& [key, value] : cfg.values())
          if (!cmd.settings.options().count(key))
            std::cerr << "relwig: warning: config key '" << key << "' is not used by " << name << "\n";
        cmd.settings.load(cfg);
      }
      const CommandResult r = dispatch(name, cmd.settings);
      std::cout << r.report.dump(2) << "\n";
      for (const auto& v : r.violations) std::cerr << "relwig: invariant violation: " << v << "\n";
      return r.ok() ? 0 : exit_violation;
    } catch (const std::invalid_argument& e) {
      std::cerr << "relwig " << name << ": " << e.what() << "\n";
      return exit_usage;
    } catch (const std::exception& e) {
      std::cerr << "relwig " << name << ": " << e.what() << "\n";
      if (std::string(e.what()).find("stability guard") != std::string::npos)
        std::cerr << "hint: rerun with a smaller --dt, or a smaller grid box (max|E| grows with radius)\n";
      return exit_violation;
    }
  }
  return exit_usage;
}
