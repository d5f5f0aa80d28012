#ifndef FRACNLS_EXPERIMENTS_HPP
#define FRACNLS_EXPERIMENTS_HPP

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fracnls/diagnostics.hpp"
#include "fracnls/evolution.hpp"
#include "fracnls/io.hpp"
#include "fracnls/oscillatory.hpp"
#include "fracnls/scattering.hpp"

// The user-facing surface: text configs, batch orchestration, CSV/JSON/SVG
// persistence. Identical configs produce byte-identical CSV outputs.

namespace fracnls {

const char* tool_version();

class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& msg, int line);
  int line() const { return line_; }

 private:
  int line_;
};

// `key = value` lines; '#' starts a comment. Keys: L, M, c0, c1_re, c1_im,
// c2_re, c2_im, c3_re, c3_im, family, eps0, xi_center, width, phase, dt,
// T_end, output_stride, snapshot_times (comma list), seed. Unknown keys are
// rejected. family=custom_table is API-only and rejected here.
RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);

// Re-parsable echo with every key in canonical order at full precision.
std::string canonical_config(const RunConfig& cfg);
std::string run_id(const RunConfig& cfg);  // FNV-1a hash of the echo

struct CommandOptions {
  std::string out_dir = "out";
  bool plot = false;
  bool override_horizon = false;
  double xi0 = 1.0;  // phase-probe frequency, snapped to the nearest node
  int sobolev_N = 8;
};

struct ExperimentRecord {
  std::string id;
  RunConfig config;
  std::vector<NormReport> series;
  std::vector<std::pair<double, double>> arg_series;  // (t, arg fhat(xi0))
  double xi0_node = 0.0;
  GrowthMonitor growth;
  double t_valid = 0.0;
  bool horizon_overridden = false;
  double mass_drift = 0.0;  // max relative over the run
  double energy_drift = 0.0;
  double wall_clock_s = 0.0;
  bool has_scattering = false;
  ScatteringResult scattering;
};

// timeseries.csv, snapshot_t*.csv, record.json (+ SVG plots with --plot)
ExperimentRecord command_simulate(const RunConfig& cfg,
                                  const CommandOptions& opt);

// simulate + modified-scattering extraction; needs >= 4 dyadic snapshots.
// Adds scattering.json, residuals.csv, w_infinity.csv.
ExperimentRecord command_scatter(const RunConfig& cfg,
                                 const CommandOptions& opt);

struct OscillatoryRow {
  double s = 0.0;
  cd integral;
  cd leading;
  double residual = 0.0;
  double rel_residual = 0.0;
  double quad_err = 0.0;
};

std::vector<OscillatoryRow> command_oscillatory(
    OscillatoryProbe probe, const std::vector<double>& s_list,
    const CommandOptions& opt);

struct DispersiveRow {
  double t = 0.0;
  DispersiveRatio r;
};

std::vector<DispersiveRow> command_dispersive(const InitialDataSpec& f,
                                              const std::vector<double>& t_list,
                                              const CommandOptions& opt);

struct GaussianIdentityRow {
  double N = 0.0;
  double closed_form = 0.0;
  cd gaussian_value;
  cd cutoff_value;
  double cutoff_abs_err = 0.0;
  bool cutoff_ok = false;
};

std::vector<GaussianIdentityRow> command_gaussian_identity(
    const std::vector<double>& N_list, const CommandOptions& opt);

// Runs each config concurrently into out_dir/<config stem>/.
// Returns the number of failed runs.
int command_batch(const std::vector<std::string>& config_paths,
                  const CommandOptions& opt);

}  // namespace fracnls

#endif
