#ifndef FRACNLS_IO_HPP
#define FRACNLS_IO_HPP

#include <string>
#include <utility>
#include <vector>

#include "fracnls/diagnostics.hpp"
#include "fracnls/evolution.hpp"
#include "fracnls/scattering.hpp"

// Plain-text artifacts: CSV at 17 significant digits and SVG line charts.
// Output bytes depend only on the data, never on clocks or paths.

namespace fracnls {

std::string format_g17(double v);

// header: t,hN,w,z,sup_u,mass,energy
void write_timeseries_csv(const std::vector<NormReport>& series,
                          const std::string& path);

// header: xi,re_fhat,im_fhat,H
void write_snapshot_csv(const ProfileState& state, const PhaseAccumulator& acc,
                        const SpectralGrid& g, const std::string& path);

struct SnapshotData {
  std::vector<double> xi;
  std::vector<cd> f_hat;
  std::vector<double> H;
  double t = 0.0;  // carried in a comment line
};

SnapshotData read_snapshot_csv(const std::string& path);

struct PlotSeries {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

// Line chart; log_log maps both axes through log10 (nonpositive points are
// dropped). The svg root carries data-* attributes with the exact
// data-to-pixel calibration so values can be re-extracted from the polylines.
void emit_plot_svg(const std::vector<PlotSeries>& series,
                   const std::string& path, bool log_log,
                   const std::string& title);

}  // namespace fracnls

#endif
