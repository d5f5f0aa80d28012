#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "fracnls/experiments.hpp"

namespace {

std::vector<double> split_list(const std::string& s) {
  std::vector<double> out;
  std::string item;
  std::istringstream ss(s);
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stod(item));
  return out;
}

void emit_error(const char* kind, const std::string& message) {
  nlohmann::json j;
  j["error"] = kind;
  j["message"] = message;
  std::fprintf(stderr, "%s\n", j.dump().c_str());
}

}  // namespace

int main(int argc, char** argv) {
  using namespace fracnls;

  CLI::App app{
      "fracnls: pseudo-spectral simulator and numerical verification "
      "toolkit for the 1-D cubic NLS with half-derivative dispersion"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", tool_version());

  std::string out_dir = "out";
  if (const char* env = std::getenv("FRACNLS_OUT")) out_dir = env;
  app.add_option("--out", out_dir, "output directory")->capture_default_str();

  bool plot = false, override_horizon = false;
  app.add_flag("--plot", plot, "emit SVG plots");
  app.add_flag("--override-horizon", override_horizon,
               "run past the wrap-around validity horizon (a warning record "
               "is written)");

  std::string config_path;
  double xi0 = 1.0;
  int sobolev_N = 8;

  CLI::App* sim = app.add_subcommand("simulate", "integrate one config");
  sim->add_option("--config", config_path, "config file")->required();
  sim->add_option("--xi0", xi0, "phase-probe frequency");
  sim->add_option("--sobolev-N", sobolev_N, "Sobolev diagnostic order");

  CLI::App* sca = app.add_subcommand(
      "scatter", "integrate and extract the modified-scattering data");
  sca->add_option("--config", config_path, "config file")->required();
  sca->add_option("--xi0", xi0, "phase-probe frequency");
  sca->add_option("--sobolev-N", sobolev_N, "Sobolev diagnostic order");

  double osc_xi = 2.0, osc_center = 2.0, osc_width = 1.0, osc_amp = 1.0,
         osc_phase = 0.0, osc_qres = 8.0;
  std::string osc_s = "64,128,256,512";
  CLI::App* osc = app.add_subcommand(
      "oscillatory", "trilinear resonance quadrature over a list of s");
  osc->add_option("--xi", osc_xi, "evaluation frequency");
  osc->add_option("--s", osc_s, "comma list of time parameters");
  osc->add_option("--center", osc_center, "probe packet center");
  osc->add_option("--width", osc_width, "probe packet width");
  osc->add_option("--amp", osc_amp, "probe packet amplitude");
  osc->add_option("--phase", osc_phase, "probe packet phase");
  osc->add_option("--qres", osc_qres, "points per oscillation (>= 8)");

  double dsp_center = 1.0, dsp_width = 0.5, dsp_amp = 0.05, dsp_phase = 0.0;
  std::string dsp_t = "1,10,100,1000";
  CLI::App* dsp =
      app.add_subcommand("dispersive", "dispersive-estimate ratio check");
  dsp->add_option("--t", dsp_t, "comma list of times");
  dsp->add_option("--center", dsp_center, "packet center");
  dsp->add_option("--width", dsp_width, "packet width");
  dsp->add_option("--amp", dsp_amp, "packet amplitude");
  dsp->add_option("--phase", dsp_phase, "packet phase");

  std::string gauss_N = "1,2,4,8,16";
  CLI::App* gid = app.add_subcommand("gaussian-identity",
                                     "oscillatory pair-integral identity");
  gid->add_option("--N", gauss_N, "comma list of N values");

  std::vector<std::string> batch_configs;
  CLI::App* bat =
      app.add_subcommand("batch", "run several configs concurrently");
  bat->add_option("configs", batch_configs, "config files")
      ->required()
      ->expected(-1);

  CLI11_PARSE(app, argc, argv);

  CommandOptions opt;
  opt.out_dir = out_dir;
  opt.plot = plot;
  opt.override_horizon = override_horizon;
  opt.xi0 = xi0;
  opt.sobolev_N = sobolev_N;

  try {
    if (sim->parsed()) {
      ExperimentRecord rec = command_simulate(parse_config_file(config_path), opt);
      std::printf(
          "run %s finished: %zu reports, mass drift %.3e, energy drift "
          "%.3e, T_valid %.6g%s\n",
          rec.id.c_str(), rec.series.size(), rec.mass_drift, rec.energy_drift,
          rec.t_valid,
          rec.config.T_end > rec.t_valid ? " (horizon exceeded)" : "");
    } else if (sca->parsed()) {
      ExperimentRecord rec = command_scatter(parse_config_file(config_path), opt);
      std::printf("run %s: p1 = %.4f (r2 = %.3f)\n", rec.id.c_str(),
                  rec.scattering.p1_estimate, rec.scattering.p1_r2);
      for (const auto& c : rec.scattering.phase_slope_checks)
        std::printf("phase slope at xi0 = %.6g: observed %.4e predicted %.4e\n",
                    c.xi0, c.observed, c.predicted);
    } else if (osc->parsed()) {
      OscillatoryProbe probe;
      probe.profile.family = InitialDataSpec::Family::gaussian_packet;
      probe.profile.eps0 = osc_amp;
      probe.profile.xi_center = osc_center;
      probe.profile.width = osc_width;
      probe.profile.phase = osc_phase;
      probe.xi = osc_xi;
      probe.quad_resolution = osc_qres;
      command_oscillatory(probe, split_list(osc_s), opt);
    } else if (dsp->parsed()) {
      InitialDataSpec f;
      f.eps0 = dsp_amp;
      f.xi_center = dsp_center;
      f.width = dsp_width;
      f.phase = dsp_phase;
      command_dispersive(f, split_list(dsp_t), opt);
    } else if (gid->parsed()) {
      command_gaussian_identity(split_list(gauss_N), opt);
    } else if (bat->parsed()) {
      const int failures = command_batch(batch_configs, opt);
      if (failures > 0) {
        emit_error("batch", std::to_string(failures) + " run(s) failed");
        return 2;
      }
    }
  } catch (const parse_error& e) {
    emit_error("config", e.what());
    return 1;
  } catch (const std::invalid_argument& e) {
    emit_error("invalid-argument", e.what());
    return 1;
  } catch (const accuracy_error& e) {
    emit_error("accuracy", e.what());
    return 3;
  } catch (const resource_error& e) {
    emit_error("resource", e.what());
    return 3;
  } catch (const numerical_blowup_error& e) {
    emit_error("blowup", e.what());
    return 2;
  } catch (const horizon_error& e) {
    emit_error("horizon", e.what());
    return 2;
  } catch (const std::exception& e) {
    emit_error("runtime", e.what());
    return 2;
  }
  return 0;
}
