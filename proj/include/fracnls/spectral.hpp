#ifndef FRACNLS_SPECTRAL_HPP
#define FRACNLS_SPECTRAL_HPP

#include <complex>
#include <vector>

// Periodic truncation of the line: box [-L, L) with M equispaced samples,
// frequency lattice xi_k = pi*k/L for k in [-M/2, M/2). All public arrays
// are in sorted-xi ("physical") order; the FFT-natural ordering is an
// implementation detail behind an explicit index map.
//
// Transform convention (continuum-scaled):
//   forward:  fhat(xi) = integral e^{-i x xi} f(x) dx      ~ dx * sum
//   inverse:  f(x)     = (2pi)^{-1} integral e^{i x xi} fhat(xi) dxi

namespace fracnls {

using cd = std::complex<double>;

struct SpectralGrid {
  double L = 0.0;  // half box length
  int M = 0;       // sample count, power of two, >= 16
  double dx = 0.0;
  double dxi = 0.0;
  std::vector<double> x_nodes;   // x_j = -L + j*dx
  std::vector<double> xi_nodes;  // ascending, xi_i = (i - M/2)*dxi
  std::vector<double> lambda;    // sqrt(|xi_i|)
  std::vector<unsigned char> dealias_mask;  // true on retained modes
  std::vector<int> fft_bin;      // physical index -> FFT bin (bijection)

  double xi_max() const { return 0.5 * M * dxi; }
  int index_of_k(int k) const { return k + M / 2; }
  int k_of_index(int i) const { return i - M / 2; }
};

SpectralGrid make_grid(double L, int M);

double lambda_symbol(double xi);  // sqrt(|xi|)

std::vector<cd> forward_transform(const std::vector<cd>& samples,
                                  const SpectralGrid& g);
std::vector<cd> inverse_transform(const std::vector<cd>& spectrum,
                                  const SpectralGrid& g);

// phases[i] = e^{-i t lambda(xi_i)}; maps profile spectrum to solution
// spectrum (u_hat = phases .* f_hat).
void half_wave_phases(double t, const SpectralGrid& g, std::vector<cd>& phases);
std::vector<cd> half_wave_propagator(const std::vector<cd>& spectrum, double t,
                                     const SpectralGrid& g);

// Unnormalized c2c FFTs (FFTW sign convention, forward uses e^{-2pi i jk/N}).
// in and out must not alias. N must be a supported transform size (any N
// works, powers of two are what the solver uses).
void fft_forward_raw(const cd* in, cd* out, int N);
void fft_backward_raw(const cd* in, cd* out, int N);

// --- smooth dyadic cutoffs -------------------------------------------------

// Even C^infinity bump: 1 on [-5/4, 5/4], 0 outside [-8/5, 8/5]; on the
// bridge, psi(1-s)/(psi(1-s)+psi(s)) with psi(r)=exp(-1/r) and
// s = (|x|-5/4)/(8/5-5/4).
double bump(double x);

struct Cutoff {
  enum class Kind { phi, phi_k, phi_k_low, phi_interval };
  Kind kind = Kind::phi;
  int k = 0;
  int m = 0;
  int lo = 0, hi = 0;  // inclusive band interval for phi_interval

  static Cutoff base();
  static Cutoff band(int k);                      // phi_k
  static Cutoff band_low(int k, int m);           // phi_k^{(m)}, needs k >= m
  static Cutoff interval(int lo, int hi, int m);  // sum of phi_k^{(m)}, k in I, k >= m
};

double cutoff_eval(const Cutoff& c, double x);

// Fourier multiplier by phi_k: P_k spectrum
std::vector<cd> band_project(const std::vector<cd>& spectrum, int k,
                             const SpectralGrid& g);

}  // namespace fracnls

#endif
