#ifndef FRACNLS_SCATTERING_HPP
#define FRACNLS_SCATTERING_HPP

#include <utility>
#include <vector>

#include "fracnls/evolution.hpp"
#include "fracnls/spectral.hpp"

// Long-time asymptotics: the running phase
//   H(xi, t) = (2 c0 / pi) |xi|^{3/2} \int_0^t |fhat(xi,s)|^2 ds/(s+1)
// is accumulated per accepted step by the trapezoid rule, and the corrected
// profile g = e^{iH} fhat is the object whose convergence is measured.

namespace fracnls {

struct PhaseAccumulator {
  double last_time = 0.0;
  std::vector<double> H;          // radians, per mode
  std::vector<double> last_abs2;  // |fhat|^2 at last_time
  std::vector<double> xi32;      // |xi|^{3/2}

  PhaseAccumulator() = default;
  PhaseAccumulator(const SpectralGrid& g, const ProfileState& s0);
};

// Trapezoid update over [acc.last_time, next.t]; next.t must be larger.
void accumulate_phase(PhaseAccumulator& acc, const ProfileState& next,
                      double c0);

// g = e^{iH} fhat; requires acc.last_time == state.t
std::vector<cd> corrected_profile(const ProfileState& state,
                                  const PhaseAccumulator& acc);

// max over retained modes of (1+|xi|)^{10} |g2-g1|, with the same relative
// spectral floor as z_norm applied to |g2-g1|.
double scattering_distance(const std::vector<cd>& g1, const std::vector<cd>& g2,
                           const SpectralGrid& g);

struct PhaseSlopeCheck {
  double xi0 = 0.0;
  double observed = 0.0;
  double predicted = 0.0;
};

struct ScatteringResult {
  std::vector<cd> w_infinity;  // corrected profile at the latest snapshot
  double p1_estimate = 0.0;    // NaN sentinel when residuals vanish
  double p1_r2 = 0.0;
  std::vector<std::pair<double, double>> residual_series;     // consecutive corrected distances
  std::vector<std::pair<double, double>> uncorrected_series;  // same on raw fhat
  std::vector<PhaseSlopeCheck> phase_slope_checks;
};

// Needs >= 4 snapshots at approximately dyadic times with matching
// accumulators. Residuals are the consecutive-pair distances
// d_i = dist(g(t_i), g(t_{i+1})) recorded at t_i; p1 is minus the fitted
// log-log slope of that series.
ScatteringResult extract_w_infinity(
    const std::vector<std::pair<ProfileState, PhaseAccumulator>>& snapshots,
    const SpectralGrid& g);

// observed: least-squares slope of the unwrapped phase series vs ln(1+t);
// predicted: -(2 c0/pi) |xi0|^{3/2} w_mag^2. The series holds raw
// arg fhat(xi0, t) samples; consecutive wrapped jumps above 0.9*pi are
// rejected as unwrap-ambiguous.
std::pair<double, double> log_phase_slope(
    const std::vector<std::pair<double, double>>& arg_series, double w_mag,
    double c0, double xi0);

}  // namespace fracnls

#endif
