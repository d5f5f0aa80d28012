#ifndef FRACNLS_EVOLUTION_HPP
#define FRACNLS_EVOLUTION_HPP

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "fracnls/initial_data.hpp"
#include "fracnls/spectral.hpp"

// Time integration of the profile equation: with f = e^{it Lambda} u the
// half-wave flow is absorbed exactly, the remaining ODE for fhat is the
// transformed cubic nonlinearity, integrated with fixed-step classical RK4.
// Cubic products are evaluated on a 2x zero-padded grid, so the discrete
// convolution over retained modes is exact (no aliased images); the 2/3
// dealias mask is applied to every nonlinearity result.

namespace fracnls {

struct Coefficients {
  double c0 = 0.0;  // gauge-invariant coefficient, real by construction
  cd c1{}, c2{}, c3{};
  bool gauge_invariant() const {
    return c1 == cd{} && c2 == cd{} && c3 == cd{};
  }
};

struct ProfileState {
  double t = 0.0;
  std::vector<cd> f_hat;  // sorted-xi order, dealiased, length M
};

class numerical_blowup_error : public std::runtime_error {
 public:
  explicit numerical_blowup_error(double t);
  double t() const { return t_; }

 private:
  double t_;
};

class horizon_error : public std::runtime_error {
 public:
  horizon_error(double t_valid, double t_end);
  double t_valid() const { return t_valid_; }

 private:
  double t_valid_;
};

// pointwise c0*|u|^2 u + c1 u^3 + c2 u conj(u)^2 + c3 conj(u)^3
std::vector<cd> nonlinearity(const std::vector<cd>& u_samples,
                             const Coefficients& c);

struct RhsWorkspace {
  std::vector<cd> phases, uhat, pad, u_fine, w_fine, bins, stage;
  std::vector<cd> k1, k2, k3, k4;
  double cached_t = 0.0;
  bool phases_valid = false;
};

void profile_rhs(const ProfileState& state, const Coefficients& c,
                 const SpectralGrid& g, RhsWorkspace& ws, std::vector<cd>& out);
std::vector<cd> profile_rhs(const ProfileState& state, const Coefficients& c,
                            const SpectralGrid& g);

void rk4_step_inplace(ProfileState& state, const Coefficients& c,
                      const SpectralGrid& g, double dt, RhsWorkspace& ws);
ProfileState rk4_step(const ProfileState& state, const Coefficients& c,
                      const SpectralGrid& g, double dt);

struct RunConfig {
  double L = 64.0;
  int M = 2048;
  Coefficients coeffs;
  InitialDataSpec init;
  double dt = 0.01;
  double T_end = 100.0;
  int output_stride = 100;
  std::vector<double> snapshot_times;  // strictly increasing, in (0, T_end]
  std::uint64_t seed = 0;  // reserved for randomized test profiles
  void validate() const;
};

// Wrap-around validity horizon of the periodic box: the fastest group
// velocity among frequencies that carry at least 1e-8 of the data's
// weighted sup norm bounds the usable time span, T_valid = 2 L sqrt(xi_min).
// The non-propagating xi = 0 mode is exempt; xi_min is floored at dxi.
double validity_horizon(const std::vector<cd>& f_hat0, const SpectralGrid& g);

struct PhaseAccumulator;  // scattering.hpp

struct StepEvent {
  const SpectralGrid& grid;
  const ProfileState& state;
  const PhaseAccumulator& acc;
  std::size_t step_index;
  bool is_snapshot;
  bool is_final;
};

using Observer = std::function<void(const StepEvent&)>;

// Steps from t = 0 to T_end; observers fire at t = 0, every output_stride
// steps, at each snapshot time (hit exactly by a shortened step), and at
// T_end. Deterministic for a given config. Throws horizon_error when T_end
// exceeds the validity horizon unless override_horizon is set.
ProfileState run_simulation(const RunConfig& cfg,
                            const std::vector<Observer>& observers,
                            bool override_horizon = false);

}  // namespace fracnls

#endif
