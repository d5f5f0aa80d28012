#include "fracnls/scattering.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "fracnls/kernels.hpp"

namespace fracnls {

PhaseAccumulator::PhaseAccumulator(const SpectralGrid& g,
                                   const ProfileState& s0) {
  last_time = s0.t;
  H.assign(g.M, 0.0);
  last_abs2.resize(g.M);
  xi32.resize(g.M);
  for (int i = 0; i < g.M; ++i) {
    last_abs2[i] = std::norm(s0.f_hat[i]);
    const double axi = std::abs(g.xi_nodes[i]);
    xi32[i] = axi * std::sqrt(axi);
  }
}

void accumulate_phase(PhaseAccumulator& acc, const ProfileState& next,
                      double c0) {
  if (!(next.t > acc.last_time))
    throw std::invalid_argument("accumulate_phase: time must increase");
  if (next.f_hat.size() != acc.H.size())
    throw std::invalid_argument("accumulate_phase: size mismatch");
  const double dt = next.t - acc.last_time;
  const double wa = 0.5 * dt / (acc.last_time + 1.0);
  const double wb = 0.5 * dt / (next.t + 1.0);
  const double pref = 2.0 * c0 / M_PI;
  for (std::size_t i = 0; i < acc.H.size(); ++i) {
    const double a2 = std::norm(next.f_hat[i]);
    acc.H[i] += pref * acc.xi32[i] * (wa * acc.last_abs2[i] + wb * a2);
    acc.last_abs2[i] = a2;
  }
  acc.last_time = next.t;
}

std::vector<cd> corrected_profile(const ProfileState& state,
                                  const PhaseAccumulator& acc) {
  if (state.f_hat.size() != acc.H.size())
    throw std::invalid_argument("corrected_profile: size mismatch");
  if (std::abs(state.t - acc.last_time) >
      1e-12 * (1.0 + std::abs(state.t)))
    throw std::invalid_argument(
        "corrected_profile: accumulator time does not match state");
  std::vector<cd> g(state.f_hat.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const cd rot{std::cos(acc.H[i]), std::sin(acc.H[i])};
    g[i] = rot * state.f_hat[i];
  }
  return g;
}

double scattering_distance(const std::vector<cd>& g1,
                           const std::vector<cd>& g2, const SpectralGrid& g) {
  if (static_cast<int>(g1.size()) != g.M ||
      static_cast<int>(g2.size()) != g.M)
    throw std::invalid_argument("scattering_distance: grid mismatch");
  // Same spectral floor as z_norm, applied to the profile amplitudes: modes
  // whose |g| sits below 1e-14 of the peak on both sides carry only roundoff,
  // and the 10th-power weight would amplify that noise past the signal.
  const auto& K = kernels::active();
  double amp2 = std::max(K.wabsmax2(g1.data(), nullptr, g1.size(), 0.0),
                         K.wabsmax2(g2.data(), nullptr, g2.size(), 0.0));
  if (amp2 == 0.0) return 0.0;
  const double floor2 = 1e-28 * amp2;
  std::vector<cd> diff(g.M);
  std::vector<double> w2(g.M);
  for (int i = 0; i < g.M; ++i) {
    const bool keep = g.dealias_mask[i] && (std::norm(g1[i]) >= floor2 ||
                                            std::norm(g2[i]) >= floor2);
    diff[i] = keep ? g2[i] - g1[i] : cd{};
    w2[i] = std::pow(1.0 + std::abs(g.xi_nodes[i]), 20);
  }
  return std::sqrt(K.wabsmax2(diff.data(), w2.data(), diff.size(), 0.0));
}

namespace {

// least squares of y against x; returns {slope, r2}
std::pair<double, double> ls_fit(const std::vector<double>& x,
                                 const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0) throw std::invalid_argument("fit: degenerate abscissae");
  const double slope = sxy / sxx;
  double r2 = 1.0;
  if (syy > 1e-300) r2 = 1.0 - (syy - slope * sxy) / syy;
  return {slope, r2};
}

}  // namespace

ScatteringResult extract_w_infinity(
    const std::vector<std::pair<ProfileState, PhaseAccumulator>>& snapshots,
    const SpectralGrid& g) {
  if (snapshots.size() < 4)
    throw std::invalid_argument("extract_w_infinity: need >= 4 snapshots");
  for (std::size_t i = 0; i + 1 < snapshots.size(); ++i) {
    const double ta = snapshots[i].first.t, tb = snapshots[i + 1].first.t;
    if (!(tb > ta))
      throw std::invalid_argument("extract_w_infinity: times must increase");
    const double ratio = (tb + 1.0) / (ta + 1.0);
    if (ratio < 1.5 || ratio > 3.0)
      throw std::invalid_argument(
          "extract_w_infinity: snapshots are not approximately dyadic");
  }

  ScatteringResult result;
  std::vector<std::vector<cd>> gs;
  gs.reserve(snapshots.size());
  for (const auto& [st, acc] : snapshots)
    gs.push_back(corrected_profile(st, acc));

  bool all_positive = true;
  for (std::size_t i = 0; i + 1 < snapshots.size(); ++i) {
    const double t = snapshots[i].first.t;
    const double dcorr = scattering_distance(gs[i], gs[i + 1], g);
    const double draw = scattering_distance(snapshots[i].first.f_hat,
                                            snapshots[i + 1].first.f_hat, g);
    result.residual_series.emplace_back(t, dcorr);
    result.uncorrected_series.emplace_back(t, draw);
    if (!(dcorr > 0.0)) all_positive = false;
  }

  result.w_infinity = gs.back();
  if (all_positive) {
    std::vector<double> x, y;
    for (const auto& [t, d] : result.residual_series) {
      x.push_back(std::log1p(t));
      y.push_back(std::log(d));
    }
    const auto [slope, r2] = ls_fit(x, y);
    result.p1_estimate = -slope;
    result.p1_r2 = r2;
  } else {
    // already converged at this resolution: report the sentinel
    result.p1_estimate = std::numeric_limits<double>::quiet_NaN();
    result.p1_r2 = 0.0;
  }
  return result;
}

std::pair<double, double> log_phase_slope(
    const std::vector<std::pair<double, double>>& arg_series, double w_mag,
    double c0, double xi0) {
  if (arg_series.size() < 5)
    throw std::invalid_argument("log_phase_slope: need >= 5 samples");
  std::vector<double> x, y;
  x.reserve(arg_series.size());
  y.reserve(arg_series.size());
  double prev_raw = arg_series.front().second;
  double unwrapped = prev_raw;
  for (std::size_t i = 0; i < arg_series.size(); ++i) {
    const auto& [t, theta] = arg_series[i];
    if (i > 0) {
      if (!(t > arg_series[i - 1].first))
        throw std::invalid_argument("log_phase_slope: times must increase");
      double jump = std::remainder(theta - prev_raw, 2.0 * M_PI);
      if (std::abs(jump) > 0.9 * M_PI)
        throw std::invalid_argument(
            "log_phase_slope: phase unwrap ambiguity, sample densely enough "
            "that consecutive jumps stay below pi");
      unwrapped += jump;
      prev_raw = theta;
    }
    x.push_back(std::log1p(t));
    y.push_back(unwrapped);
  }
  const auto [slope, r2] = ls_fit(x, y);
  (void)r2;
  const double axi = std::abs(xi0);
  const double predicted = -(2.0 * c0 / M_PI) * axi * std::sqrt(axi) * w_mag * w_mag;
  return {slope, predicted};
}

}  // namespace fracnls
