#pragma once

// Figure data generators and the command implementations behind the relwig
// CLI. Commands write their outputs through an OutputSink and return a JSON
// report plus the list of invariant violations (empty on success).

#include <Eigen/Dense>
#include <filesystem>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "relwig/evolution.hpp"
#include "relwig/free_particle.hpp"
#include "relwig/grid.hpp"
#include "relwig/hamiltonian.hpp"
#include "relwig/state.hpp"
#include "relwig/svg.hpp"

namespace relwig {

struct OutputFormats {
  bool csv = true, json = false, svg = false;

  /// Comma-separated subset of csv,json,svg; throws std::invalid_argument.
  static OutputFormats parse(const std::string& list);
  std::string describe() const;
};

/// Writes figure data into one directory. Reports and manifests are always
/// written as JSON; fields follow the selected formats.
class OutputSink {
 public:
  /// Creates the directory; throws std::runtime_error when it is not writable.
  OutputSink(std::filesystem::path dir, OutputFormats formats);

  const std::filesystem::path& dir() const { return dir_; }
  const OutputFormats& formats() const { return formats_; }

  void field(const std::string& stem, const ComplexField& f, const FieldMetadata& meta,
             const std::string& title);
  /// CSV table with a metadata preamble; cells are already formatted.
  void table(const std::string& stem, const FieldMetadata& meta, const std::vector<std::string>& header,
             const std::vector<std::vector<std::string>>& rows);
  void heatmap(const std::string& stem, std::span<const double> values, std::size_t rows,
               std::size_t cols, const HeatmapSpec& spec);
  void json(const std::string& name, const nlohmann::ordered_json& j);

  const std::vector<std::string>& written() const { return written_; }

 private:
  void write_text(const std::string& name, const std::string& text);

  std::filesystem::path dir_;
  OutputFormats formats_;
  std::vector<std::string> written_;
};

struct CommandResult {
  nlohmann::ordered_json report;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// ---- fig1: epsilon factor ----

/// Node-inclusive rectangular sampling of the (p1, p2) plane.
struct SurfaceAxes {
  double p1_min = -5.0, p1_max = 5.0, p2_min = -5.0, p2_max = 5.0;
  std::size_t n1 = 201, n2 = 201;

  /// "p1min,p1max,p2min,p2max,n1,n2" with n >= 2.
  static SurfaceAxes parse(const std::string& spec);
  double p1(std::size_t i) const;
  double p2(std::size_t j) const;
};

/// epsilon(p1_i, p2_j), row-major [i][j].
std::vector<double> epsilon_surface(const SurfaceAxes& axes);
/// max |eps - 1| over samples with |p1| = |p2| (to 1e-12 of the spacing).
double epsilon_ridge_residual(const SurfaceAxes& axes, std::span<const double> eps);
/// True when every row grows strictly on both sides of the diagonal.
bool monotone_away_from_diagonal(const Eigen::MatrixXd& eps);

enum class Fig1System { FreeParticle, Rotator, Both };
Fig1System parse_fig1_system(const std::string& name);

struct Fig1Options {
  Fig1System system = Fig1System::Both;
  double lambda = 10.0;
  std::size_t basis_size = 20;
  SurfaceAxes axes;
};

CommandResult run_fig1(const Fig1Options& opts, OutputSink& out);

// ---- fig2: rotator Wigner panels ----

enum class Fig2Variant { Mixed, NonlocalSuperposition, StandardSuperposition };
const char* to_string(Fig2Variant v);

struct Fig2Panels {
  ComplexField mixed, nonlocal, standard, difference;
  double epsilon02 = 0.0;
  double amplitude_ratio = 0.0;   // least-squares <I_std, I_nl> / <I_nl, I_nl>
  double support_residual = 0.0;  // max |difference - (eps02 - 1) I_nl|
  double mixed_rotation = 0.0;    // max |W(p,q) - W(-q,p)| on the mixed panel
  double mixed_radial = 0.0;      // max |W_mixed - closed-form radial profile|
  double normalization[3] = {0, 0, 0};  // |Int W - 1| for mixed, nonlocal, standard
  double max_imag = 0.0;
};

/// Default grid [-5,5]^2, 256^2.
PhaseGrid fig2_default_grid();
Fig2Panels fig2_panels(double lambda, const PhaseGrid& grid);

struct Fig2Options {
  double lambda = 10.0;
  PhaseGrid grid = fig2_default_grid();
};

CommandResult run_fig2(const Fig2Options& opts, OutputSink& out);

// ---- fig3: free wave packet ----

struct Fig3Fields {
  ComplexField epsilon, unit;
  double min_epsilon = 0.0, min_unit = 0.0;
  double max_imag = 0.0;      // max |Im W| of the epsilon field
  double integral = 0.0;      // Int W_eps
  double width = 0.0;         // sqrt(<q^2>) of the |W| q-marginal
  double signed_variance = 0.0;  // <q^2> of the signed marginal
};

/// Default grid p in [-40,40] mc, q in [-1,1] hbar/mc, 512^2.
PhaseGrid fig3_default_grid();
Fig3Fields fig3_fields(double delta_p, double p0, const PhaseGrid& grid);

struct Fig3Options {
  double delta_p = 8.0;
  double p0 = 0.0;
  PhaseGrid grid = fig3_default_grid();
};

CommandResult run_fig3(const Fig3Options& opts, OutputSink& out);

// ---- evolve ----

struct EvolveOptions {
  std::string state_file;
  EvolutionPlan::Method method = EvolutionPlan::Method::Spectral;
  double dt = 1e-3;
  double t_final = 1.0;
  Axis axis = Axis::Position;
  unsigned power = 2;
  bool nonlocal = false;
  std::optional<PhaseGrid> grid;  // GridRK4 only; default [-10,10]^2, 96^2
  std::size_t frame_every = 0;    // GridRK4 frame dumps, 0 = none
};

/// Rotator E symbol tapered to a constant between 0.6 and 0.9 of the grid half-width.
SymbolField tapered_rotator_hamiltonian(double lambda, const PhaseGrid& grid);

CommandResult run_evolve(const EvolveOptions& opts, OutputSink& out);

// ---- validate ----

struct ValidateOptions {
  std::string state_file;
  bool nonlocal = false;
  bool require_pure = false;
  std::optional<PhaseGrid> grid;
};

/// Square grid wide and fine enough for the first n levels.
PhaseGrid validation_grid(std::size_t n);

CommandResult run_validate(const ValidateOptions& opts, OutputSink& out);

// ---- hamiltonian ----

struct HamiltonianCommandOptions {
  double lambda = 1.0;
  PhaseGrid grid = PhaseGrid::square(5.0, 128);
  HamiltonianOptions series;
};

CommandResult run_hamiltonian(const HamiltonianCommandOptions& opts, OutputSink& out);

}  // namespace relwig
