#ifndef FRACNLS_DIAGNOSTICS_HPP
#define FRACNLS_DIAGNOSTICS_HPP

#include <utility>
#include <vector>

#include "fracnls/evolution.hpp"
#include "fracnls/spectral.hpp"

namespace fracnls {

struct NormReport {
  double t = 0.0;
  double sobolev_HN = 0.0;
  double w_norm = 0.0;  // the ||x d/dx f||_L2 part of the W norm
  double z_norm = 0.0;
  double sup_u = 0.0;
  double mass = 0.0;
  double energy = 0.0;
};

// ((2pi)^{-1} sum (1+xi^2)^N |fhat|^2 dxi)^{1/2}; the weight is taken in log
// space so large N does not overflow before it meets the spectral decay.
double sobolev_norm(const std::vector<cd>& f_hat, int N, const SpectralGrid& g);

// (2pi)^{-1/2} || d/dxi (xi fhat) ||_L2 by centered differences (one-sided at
// the ends); equals ||x d/dx f||_L2 under the transform convention.
double weighted_norm_W(const std::vector<cd>& f_hat, const SpectralGrid& g);

// max (1+|xi|)^{10} |fhat| over modes with |fhat| >= 1e-14 * max|fhat|
double z_norm(const std::vector<cd>& f_hat, const SpectralGrid& g);

// ||u(t)||_inf via 4x zero-padded reconstruction plus a parabolic peak refine
double sup_norm_u(const ProfileState& state, const SpectralGrid& g);

// max |z_i| with a 3-point parabolic refinement on |z|^2 (periodic neighbors)
double max_abs_refined(const std::vector<cd>& z);

double mass(const std::vector<cd>& f_hat, const SpectralGrid& g);

// (2pi)^{-1} sum Lambda |fhat|^2 dxi + (c0/2) sum |u|^4 dx
double energy(const ProfileState& state, double c0, const SpectralGrid& g);

NormReport compute_report(const ProfileState& state, double c0,
                          const SpectralGrid& g, int N = 8);

struct DecayFit {
  double exponent = 0.0;
  double r2 = 0.0;
};

// least-squares slope of log(value) against log(1+t) over t in [t_lo, t_hi]
DecayFit decay_fit(const std::vector<std::pair<double, double>>& series,
                   double t_lo, double t_hi, int min_points = 5);

// Monitors ||u(t2)||_{H^N} - ||u(t1)||_{H^N} against the integral of
// ||u||_{H^N} ||u||_inf^2 between consecutive reports; flagged when the
// observed ratio exceeds the configured constant.
struct GrowthMonitor {
  double max_ratio = 0.0;
  bool flagged = false;
  int intervals = 0;
};

GrowthMonitor energy_growth_monitor(const std::vector<NormReport>& series,
                                    double flag_constant = 50.0);

}  // namespace fracnls

#endif
