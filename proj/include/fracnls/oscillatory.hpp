#ifndef FRACNLS_OSCILLATORY_HPP
#define FRACNLS_OSCILLATORY_HPP

#include <stdexcept>
#include <vector>

#include "fracnls/initial_data.hpp"
#include "fracnls/spectral.hpp"

// Independent quadrature checks of the resonance analysis: the trilinear
// oscillatory integral, its resonant leading term with constant 8*pi, the
// Gaussian/cutoff pair integrals, and the dispersive-estimate ratio.
//
// The 2-D integrals here all have the form
//   I = sum_{i,j} F(x_i) G(y_j) K(x_i + y_j) h^2
// on a shared uniform lattice, since both e^{-ixy} (after completing the
// square) and e^{is Phi} factor over the x-, y-, and (x+y)-lattices. The
// inner sliding dot product is a dispatched kernel; evaluation on the
// half-resolution sublattice provides the a-posteriori error estimate.

namespace fracnls {

class accuracy_error : public std::runtime_error {
 public:
  accuracy_error(const std::string& msg, double suggested_resolution);
  double suggested_resolution() const { return suggested_; }

 private:
  double suggested_;
};

class resource_error : public std::runtime_error {
 public:
  explicit resource_error(const std::string& msg);
};

// Lambda(xi) - Lambda(xi+eta) - Lambda(xi+sigma) + Lambda(xi+eta+sigma)
double phase_Phi(double xi, double eta, double sigma);

enum class PairVariant { gaussian, cutoff };

// gaussian: closed form 2*pi*(1+4/N^4)^{-1/2} of
//   iint e^{-ixy} e^{-x^2/N^2} e^{-y^2/N^2} dx dy,  N >= 1/4
// cutoff: iint e^{-ixy} phi(x/N) phi(y/N) dx dy by oscillation-resolving
//   2-D quadrature (throws resource_error when N is too large for the
//   point budget; use the gaussian variant instead).
cd gaussian_pair_integral(double N, PairVariant variant);

struct OscillatoryProbe {
  InitialDataSpec profile;  // closed-form fhat, treated as a profile snapshot
  double xi = 2.0;
  double s = 256.0;
  double quad_resolution = 8.0;  // points per 2*pi of phase, >= 8
};

struct TrilinearResult {
  cd value;
  double rel_err_est;  // |full - half resolution| / |full|
};

// iint e^{i s Phi(xi,eta,sigma)} fhat(xi+eta) fhat(xi+sigma)
//      conj(fhat(xi+eta+sigma)) deta dsigma
// over the effective support. Throws accuracy_error when the half-resolution
// check exceeds 5% of the magnitude.
TrilinearResult trilinear_integral(const OscillatoryProbe& p);

struct StationaryPhaseResult {
  cd integral;
  cd leading;  // 8*pi*|xi|^{3/2} |fhat(xi)|^2 fhat(xi) / (s+1)
  double residual;
  double rel_residual;
  double quad_err;
};

StationaryPhaseResult stationary_phase_residual(const OscillatoryProbe& p);

// sup_x |e^{it Lambda} f| evaluated grid-free: the closed-form spectrum is
// sampled on a box sized from the group-velocity span, reconstructed by one
// oversampled FFT, peak-refined. Closed-form families only.
double linear_flow_sup(const InitialDataSpec& f, double t);

struct DispersiveRatio {
  double lhs = 0.0;    // ||e^{it Lambda} f||_inf
  double rhs = 0.0;    // (1+|t|)^{-1/2}|||xi|^{3/4}fhat||_inf
                       //   + (1+|t|)^{-5/8}(||x f'||_L2 + ||f||_H2)
  double ratio = 0.0;
};

DispersiveRatio dispersive_ratio(const InitialDataSpec& f, double t);

}  // namespace fracnls

#endif
