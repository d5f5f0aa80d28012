#include "fracnls/diagnostics.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "fracnls/kernels.hpp"

namespace fracnls {

double sobolev_norm(const std::vector<cd>& f_hat, int N,
                    const SpectralGrid& g) {
  if (static_cast<int>(f_hat.size()) != g.M)
    throw std::invalid_argument("sobolev_norm: length mismatch");
  if (N < 0) throw std::invalid_argument("sobolev_norm: N must be >= 0");
  std::vector<double> w(g.M);
  for (int i = 0; i < g.M; ++i) {
    const double xi = g.xi_nodes[i];
    w[i] = std::exp(N * std::log1p(xi * xi));
  }
  const double s =
      kernels::active().wsumsq(f_hat.data(), w.data(), f_hat.size());
  return std::sqrt(s * g.dxi / (2.0 * M_PI));
}

double weighted_norm_W(const std::vector<cd>& f_hat, const SpectralGrid& g) {
  if (static_cast<int>(f_hat.size()) != g.M)
    throw std::invalid_argument("weighted_norm_W: length mismatch");
  const int M = g.M;
  std::vector<cd> xf(M);
  for (int i = 0; i < M; ++i) xf[i] = g.xi_nodes[i] * f_hat[i];
  std::vector<cd> d(M);
  const double inv2 = 1.0 / (2.0 * g.dxi);
  for (int i = 1; i + 1 < M; ++i) d[i] = (xf[i + 1] - xf[i - 1]) * inv2;
  d[0] = (-3.0 * xf[0] + 4.0 * xf[1] - xf[2]) * inv2;
  d[M - 1] = (3.0 * xf[M - 1] - 4.0 * xf[M - 2] + xf[M - 3]) * inv2;
  const double s = kernels::active().wsumsq(d.data(), nullptr, d.size());
  return std::sqrt(s * g.dxi) / std::sqrt(2.0 * M_PI);
}

double z_norm(const std::vector<cd>& f_hat, const SpectralGrid& g) {
  if (static_cast<int>(f_hat.size()) != g.M)
    throw std::invalid_argument("z_norm: length mismatch");
  const auto& K = kernels::active();
  const double max2 = K.wabsmax2(f_hat.data(), nullptr, f_hat.size(), 0.0);
  if (max2 == 0.0) return 0.0;
  std::vector<double> w2(g.M);
  for (int i = 0; i < g.M; ++i)
    w2[i] = std::pow(1.0 + std::abs(g.xi_nodes[i]), 20);
  const double floor2 = 1e-28 * max2;
  return std::sqrt(K.wabsmax2(f_hat.data(), w2.data(), f_hat.size(), floor2));
}

double max_abs_refined(const std::vector<cd>& z) {
  const auto& K = kernels::active();
  const double max2 = K.wabsmax2(z.data(), nullptr, z.size(), 0.0);
  if (max2 == 0.0) return 0.0;
  std::size_t imax = 0;
  for (std::size_t i = 0; i < z.size(); ++i)
    if (std::norm(z[i]) == max2) {
      imax = i;
      break;
    }
  const std::size_t n = z.size();
  const double ym = std::norm(z[(imax + n - 1) % n]);
  const double y0 = std::norm(z[imax]);
  const double yp = std::norm(z[(imax + 1) % n]);
  const double denom = ym - 2.0 * y0 + yp;
  double best = y0;
  if (denom < 0.0) {
    const double delta = 0.5 * (ym - yp) / denom;
    if (std::abs(delta) <= 1.0) best = y0 - 0.25 * (ym - yp) * delta;
  }
  return std::sqrt(std::max(best, y0));
}

double sup_norm_u(const ProfileState& state, const SpectralGrid& g) {
  if (static_cast<int>(state.f_hat.size()) != g.M)
    throw std::invalid_argument("sup_norm_u: length mismatch");
  const int M = g.M;
  const int Mp = 4 * M;
  std::vector<cd> phases;
  half_wave_phases(state.t, g, phases);
  std::vector<cd> bins(Mp, cd{});
  const double scale = 1.0 / (2.0 * g.L);
  for (int i = 0; i < M; ++i) {
    const int k = i - M / 2;
    const int bin = (k >= 0) ? k : k + Mp;
    const double s = (i & 1) ? -scale : scale;
    bins[bin] = s * (state.f_hat[i] * phases[i]);
  }
  std::vector<cd> u(Mp);
  fft_backward_raw(bins.data(), u.data(), Mp);
  return max_abs_refined(u);
}

double mass(const std::vector<cd>& f_hat, const SpectralGrid& g) {
  if (static_cast<int>(f_hat.size()) != g.M)
    throw std::invalid_argument("mass: length mismatch");
  const double s = kernels::active().wsumsq(f_hat.data(), nullptr, f_hat.size());
  return s * g.dxi / (2.0 * M_PI);
}

double energy(const ProfileState& state, double c0, const SpectralGrid& g) {
  if (static_cast<int>(state.f_hat.size()) != g.M)
    throw std::invalid_argument("energy: length mismatch");
  const double lin =
      kernels::active().wsumsq(state.f_hat.data(), g.lambda.data(),
                               state.f_hat.size()) *
      g.dxi / (2.0 * M_PI);
  const std::vector<cd> uhat =
      half_wave_propagator(state.f_hat, state.t, g);
  const std::vector<cd> u = inverse_transform(uhat, g);
  double quart = 0.0;
  for (const cd& v : u) {
    const double m2 = std::norm(v);
    quart += m2 * m2;
  }
  return lin + 0.5 * c0 * quart * g.dx;
}

NormReport compute_report(const ProfileState& state, double c0,
                          const SpectralGrid& g, int N) {
  NormReport r;
  r.t = state.t;
  r.sobolev_HN = sobolev_norm(state.f_hat, N, g);
  r.w_norm = weighted_norm_W(state.f_hat, g);
  r.z_norm = z_norm(state.f_hat, g);
  r.sup_u = sup_norm_u(state, g);
  r.mass = mass(state.f_hat, g);
  r.energy = energy(state, c0, g);
  return r;
}

DecayFit decay_fit(const std::vector<std::pair<double, double>>& series,
                   double t_lo, double t_hi, int min_points) {
  std::vector<double> x, y;
  for (const auto& [t, v] : series) {
    if (t < t_lo || t > t_hi) continue;
    if (!(v > 0.0))
      throw std::invalid_argument("decay_fit: values must be positive");
    x.push_back(std::log1p(t));
    y.push_back(std::log(v));
  }
  if (static_cast<int>(x.size()) < min_points)
    throw std::invalid_argument("decay_fit: too few points in window");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= y.size();
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0)
    throw std::invalid_argument("decay_fit: degenerate time window");
  DecayFit fit;
  fit.exponent = sxy / sxx;
  fit.r2 = (syy > 1e-300) ? 1.0 - (syy - fit.exponent * sxy) / syy : 1.0;
  return fit;
}

GrowthMonitor energy_growth_monitor(const std::vector<NormReport>& series,
                                    double flag_constant) {
  GrowthMonitor m;
  for (std::size_t i = 0; i + 1 < series.size(); ++i) {
    const NormReport& a = series[i];
    const NormReport& b = series[i + 1];
    const double dtt = b.t - a.t;
    if (!(dtt > 0.0)) continue;
    const double integral = 0.5 * dtt *
                            (a.sobolev_HN * a.sup_u * a.sup_u +
                             b.sobolev_HN * b.sup_u * b.sup_u);
    if (integral <= 1e-300) continue;
    const double ratio = (b.sobolev_HN - a.sobolev_HN) / integral;
    m.max_ratio = std::max(m.max_ratio, ratio);
    ++m.intervals;
  }
  m.flagged = m.max_ratio > flag_constant;
  return m;
}

}  // namespace fracnls
