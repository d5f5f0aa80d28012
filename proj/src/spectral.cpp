#include "fracnls/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "fracnls/kernels.hpp"

namespace fracnls {

namespace {

bool is_pow2(int m) { return m > 0 && (m & (m - 1)) == 0; }

// FFTW plans are cached per size; creation is serialized (FFTW planning is
// not thread safe), execution through fftw_execute_dft is.
struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

PlanPair& plans_for(int N) {
  static std::map<int, PlanPair> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(N);
  if (it != cache.end()) return it->second;
  fftw_complex* buf_in = fftw_alloc_complex(static_cast<size_t>(N));
  fftw_complex* buf_out = fftw_alloc_complex(static_cast<size_t>(N));
  PlanPair p;
  p.fwd = fftw_plan_dft_1d(N, buf_in, buf_out, FFTW_FORWARD,
                           FFTW_ESTIMATE | FFTW_UNALIGNED);
  p.bwd = fftw_plan_dft_1d(N, buf_in, buf_out, FFTW_BACKWARD,
                           FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(buf_in);
  fftw_free(buf_out);
  return cache.emplace(N, p).first->second;
}

}  // namespace

void fft_forward_raw(const cd* in, cd* out, int N) {
  PlanPair& p = plans_for(N);
  fftw_execute_dft(p.fwd,
                   reinterpret_cast<fftw_complex*>(const_cast<cd*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

void fft_backward_raw(const cd* in, cd* out, int N) {
  PlanPair& p = plans_for(N);
  fftw_execute_dft(p.bwd,
                   reinterpret_cast<fftw_complex*>(const_cast<cd*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

SpectralGrid make_grid(double L, int M) {
  if (!(L > 0.0)) throw std::invalid_argument("make_grid: L must be positive");
  if (!is_pow2(M) || M < 16)
    throw std::invalid_argument(
        "make_grid: M must be a power of two with M >= 16");

  SpectralGrid g;
  g.L = L;
  g.M = M;
  g.dx = 2.0 * L / M;
  g.dxi = M_PI / L;
  g.x_nodes.resize(M);
  g.xi_nodes.resize(M);
  g.lambda.resize(M);
  g.dealias_mask.resize(M);
  g.fft_bin.resize(M);
  for (int i = 0; i < M; ++i) {
    const int k = i - M / 2;
    g.x_nodes[i] = -L + i * g.dx;
    g.xi_nodes[i] = k * g.dxi;
    g.lambda[i] = std::sqrt(std::abs(g.xi_nodes[i]));
    // 2/3 rule, exact in index space: |k| <= (2/3)*(M/2)
    g.dealias_mask[i] = (3 * std::abs(k) <= M) ? 1 : 0;
    g.fft_bin[i] = (k >= 0) ? k : k + M;
  }
  return g;
}

double lambda_symbol(double xi) { return std::sqrt(std::abs(xi)); }

std::vector<cd> forward_transform(const std::vector<cd>& samples,
                                  const SpectralGrid& g) {
  if (static_cast<int>(samples.size()) != g.M)
    throw std::invalid_argument("forward_transform: length mismatch");
  std::vector<cd> bins(g.M);
  fft_forward_raw(samples.data(), bins.data(), g.M);
  std::vector<cd> out(g.M);
  // fhat(xi_k) = dx * (-1)^k * DFT_k ; (-1)^k = (-1)^i since M/2 is even
  for (int i = 0; i < g.M; ++i) {
    const double sign = (i & 1) ? -g.dx : g.dx;
    out[i] = sign * bins[g.fft_bin[i]];
  }
  return out;
}

std::vector<cd> inverse_transform(const std::vector<cd>& spectrum,
                                  const SpectralGrid& g) {
  if (static_cast<int>(spectrum.size()) != g.M)
    throw std::invalid_argument("inverse_transform: length mismatch");
  std::vector<cd> bins(g.M);
  const double scale = 1.0 / (2.0 * g.L);  // dxi/(2pi)
  for (int i = 0; i < g.M; ++i) {
    const double s = (i & 1) ? -scale : scale;
    bins[g.fft_bin[i]] = s * spectrum[i];
  }
  std::vector<cd> out(g.M);
  fft_backward_raw(bins.data(), out.data(), g.M);
  return out;
}

void half_wave_phases(double t, const SpectralGrid& g,
                      std::vector<cd>& phases) {
  phases.resize(g.M);
  for (int i = 0; i < g.M; ++i) {
    const double a = -t * g.lambda[i];
    phases[i] = {std::cos(a), std::sin(a)};
  }
}

std::vector<cd> half_wave_propagator(const std::vector<cd>& spectrum, double t,
                                     const SpectralGrid& g) {
  if (static_cast<int>(spectrum.size()) != g.M)
    throw std::invalid_argument("half_wave_propagator: length mismatch");
  std::vector<cd> phases;
  half_wave_phases(t, g, phases);
  std::vector<cd> out(g.M);
  kernels::active().cmul(spectrum.data(), phases.data(), out.data(),
                         spectrum.size());
  return out;
}

// --- cutoffs ----------------------------------------------------------------

double bump(double x) {
  const double a = 1.25, b = 1.6;
  const double ax = std::abs(x);
  if (ax <= a) return 1.0;
  if (ax >= b) return 0.0;
  const double s = (ax - a) / (b - a);
  const double pl = std::exp(-1.0 / (1.0 - s));
  const double pr = std::exp(-1.0 / s);
  return pl / (pl + pr);
}

Cutoff Cutoff::base() { return Cutoff{Kind::phi, 0, 0, 0, 0}; }

Cutoff Cutoff::band(int k) { return Cutoff{Kind::phi_k, k, 0, 0, 0}; }

Cutoff Cutoff::band_low(int k, int m) {
  if (k < m)
    throw std::invalid_argument("Cutoff::band_low: requires k >= m");
  return Cutoff{Kind::phi_k_low, k, m, 0, 0};
}

Cutoff Cutoff::interval(int lo, int hi, int m) {
  if (hi < lo) throw std::invalid_argument("Cutoff::interval: hi < lo");
  return Cutoff{Kind::phi_interval, 0, m, lo, hi};
}

namespace {

double phi_k_eval(int k, double x) {
  return bump(std::ldexp(x, -k)) - bump(std::ldexp(x, -(k - 1)));
}

double phi_k_low_eval(int k, int m, double x) {
  if (k < m) throw std::invalid_argument("cutoff_eval: requires k >= m");
  if (k == m) return bump(std::ldexp(x, -m));
  return phi_k_eval(k, x);
}

}  // namespace

double cutoff_eval(const Cutoff& c, double x) {
  switch (c.kind) {
    case Cutoff::Kind::phi:
      return bump(x);
    case Cutoff::Kind::phi_k:
      return phi_k_eval(c.k, x);
    case Cutoff::Kind::phi_k_low:
      return phi_k_low_eval(c.k, c.m, x);
    case Cutoff::Kind::phi_interval: {
      double acc = 0.0;
      for (int k = std::max(c.lo, c.m); k <= c.hi; ++k)
        acc += phi_k_low_eval(k, c.m, x);
      return acc;
    }
  }
  return 0.0;
}

std::vector<cd> band_project(const std::vector<cd>& spectrum, int k,
                             const SpectralGrid& g) {
  if (static_cast<int>(spectrum.size()) != g.M)
    throw std::invalid_argument("band_project: length mismatch");
  std::vector<cd> out(g.M);
  for (int i = 0; i < g.M; ++i) out[i] = spectrum[i] * phi_k_eval(k, g.xi_nodes[i]);
  return out;
}

}  // namespace fracnls
