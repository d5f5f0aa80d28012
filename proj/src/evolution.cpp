#include "fracnls/evolution.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <string>

#include "fracnls/kernels.hpp"
#include "fracnls/scattering.hpp"

namespace fracnls {

numerical_blowup_error::numerical_blowup_error(double t)
    : std::runtime_error("numerical blowup at t = " + std::to_string(t)),
      t_(t) {}

horizon_error::horizon_error(double t_valid, double t_end)
    : std::runtime_error("T_end = " + std::to_string(t_end) +
                         " exceeds the wrap-around validity horizon T_valid "
                         "= " +
                         std::to_string(t_valid) +
                         " (use the horizon override to run anyway)"),
      t_valid_(t_valid) {}

std::vector<cd> nonlinearity(const std::vector<cd>& u_samples,
                             const Coefficients& c) {
  std::vector<cd> out(u_samples.size());
  kernels::active().cubic_nl(u_samples.data(), out.data(), u_samples.size(),
                             c.c0, c.c1, c.c2, c.c3);
  return out;
}

namespace {

void ensure_workspace(RhsWorkspace& ws, int M) {
  const std::size_t m = static_cast<std::size_t>(M);
  if (ws.uhat.size() == m) return;
  ws.phases.resize(m);
  ws.uhat.resize(m);
  ws.pad.resize(2 * m);
  ws.u_fine.resize(2 * m);
  ws.w_fine.resize(2 * m);
  ws.bins.resize(2 * m);
  ws.stage.resize(m);
  ws.k1.resize(m);
  ws.k2.resize(m);
  ws.k3.resize(m);
  ws.k4.resize(m);
  ws.phases_valid = false;
}

}  // namespace

void profile_rhs(const ProfileState& state, const Coefficients& c,
                 const SpectralGrid& g, RhsWorkspace& ws,
                 std::vector<cd>& out) {
  const int M = g.M;
  if (static_cast<int>(state.f_hat.size()) != M)
    throw std::invalid_argument("profile_rhs: state does not match grid");
  ensure_workspace(ws, M);
  out.resize(state.f_hat.size());

  const auto& K = kernels::active();
  if (!ws.phases_valid || ws.cached_t != state.t) {
    half_wave_phases(state.t, g, ws.phases);
    ws.cached_t = state.t;
    ws.phases_valid = true;
  }

  // solution spectrum, then band-limited samples on the 2x fine grid
  K.cmul(state.f_hat.data(), ws.phases.data(), ws.uhat.data(), M);
  const int Mp = 2 * M;
  std::memset(ws.pad.data(), 0, sizeof(cd) * Mp);
  const double inv_scale = 1.0 / (2.0 * g.L);  // dxi/(2pi)
  for (int i = 0; i < M; ++i) {
    const int k = i - M / 2;
    const int bin = (k >= 0) ? k : k + Mp;
    const double s = (i & 1) ? -inv_scale : inv_scale;
    ws.pad[bin] = s * ws.uhat[i];
  }
  fft_backward_raw(ws.pad.data(), ws.u_fine.data(), Mp);

  K.cubic_nl(ws.u_fine.data(), ws.w_fine.data(), Mp, c.c0, c.c1, c.c2, c.c3);

  fft_forward_raw(ws.w_fine.data(), ws.bins.data(), Mp);
  const double h_fine = g.dx * 0.5;
  for (int i = 0; i < M; ++i) {
    if (!g.dealias_mask[i]) {
      out[i] = cd{};
      continue;
    }
    const int k = i - M / 2;
    const int bin = (k >= 0) ? k : k + Mp;
    const double s = (i & 1) ? -h_fine : h_fine;
    const cd w = s * ws.bins[bin];
    const cd z = w * std::conj(ws.phases[i]);  // e^{+it Lambda} w
    out[i] = cd{z.imag(), -z.real()};          // -i * z
  }
}

std::vector<cd> profile_rhs(const ProfileState& state, const Coefficients& c,
                            const SpectralGrid& g) {
  RhsWorkspace ws;
  std::vector<cd> out;
  profile_rhs(state, c, g, ws, out);
  return out;
}

void rk4_step_inplace(ProfileState& state, const Coefficients& c,
                      const SpectralGrid& g, double dt, RhsWorkspace& ws) {
  if (!(dt > 0.0)) throw std::invalid_argument("rk4_step: dt must be positive");
  const std::size_t M = state.f_hat.size();
  ensure_workspace(ws, g.M);
  const auto& K = kernels::active();
  const double t0 = state.t;

  ProfileState stage;
  stage.f_hat.swap(ws.stage);

  profile_rhs(state, c, g, ws, ws.k1);

  stage.t = t0 + 0.5 * dt;
  stage.f_hat.resize(M);
  K.clincomb(stage.f_hat.data(), state.f_hat.data(), ws.k1.data(), 0.5 * dt, M);
  profile_rhs(stage, c, g, ws, ws.k2);

  K.clincomb(stage.f_hat.data(), state.f_hat.data(), ws.k2.data(), 0.5 * dt, M);
  profile_rhs(stage, c, g, ws, ws.k3);

  stage.t = t0 + dt;
  K.clincomb(stage.f_hat.data(), state.f_hat.data(), ws.k3.data(), dt, M);
  profile_rhs(stage, c, g, ws, ws.k4);

  // y += dt/6 (k1 + 2 k2 + 2 k3 + k4)
  K.caxpy(ws.k1.data(), ws.k2.data(), 2.0, M);
  K.caxpy(ws.k1.data(), ws.k3.data(), 2.0, M);
  K.caxpy(ws.k1.data(), ws.k4.data(), 1.0, M);
  K.caxpy(state.f_hat.data(), ws.k1.data(), dt / 6.0, M);
  state.t = t0 + dt;

  ws.stage.swap(stage.f_hat);

  const double m2 = K.wsumsq(state.f_hat.data(), nullptr, M);
  if (!std::isfinite(m2)) throw numerical_blowup_error(state.t);
}

ProfileState rk4_step(const ProfileState& state, const Coefficients& c,
                      const SpectralGrid& g, double dt) {
  ProfileState next = state;
  RhsWorkspace ws;
  rk4_step_inplace(next, c, g, dt, ws);
  return next;
}

void RunConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("config: dt must be positive");
  if (!(T_end >= dt))
    throw std::invalid_argument("config: T_end must be at least dt");
  if (output_stride < 1)
    throw std::invalid_argument("config: output_stride must be >= 1");
  init.validate();
  double prev = 0.0;
  for (double ts : snapshot_times) {
    if (!(ts > prev))
      throw std::invalid_argument(
          "config: snapshot_times must be strictly increasing and positive");
    if (ts > T_end)
      throw std::invalid_argument("config: snapshot time beyond T_end");
    prev = ts;
  }
}

double validity_horizon(const std::vector<cd>& f_hat0, const SpectralGrid& g) {
  double zmax = 0.0;
  std::vector<double> contrib(g.M);
  for (int i = 0; i < g.M; ++i) {
    const double w = std::pow(1.0 + std::abs(g.xi_nodes[i]), 10);
    contrib[i] = w * std::abs(f_hat0[i]);
    zmax = std::max(zmax, contrib[i]);
  }
  if (zmax == 0.0) return std::numeric_limits<double>::infinity();
  const double thr = 1e-8 * zmax;
  double xi_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < g.M; ++i) {
    const double axi = std::abs(g.xi_nodes[i]);
    if (axi > 0.0 && contrib[i] >= thr) xi_min = std::min(xi_min, axi);
  }
  if (!std::isfinite(xi_min)) return std::numeric_limits<double>::infinity();
  xi_min = std::max(xi_min, g.dxi);
  return 2.0 * g.L * std::sqrt(xi_min);
}

ProfileState run_simulation(const RunConfig& cfg,
                            const std::vector<Observer>& observers,
                            bool override_horizon) {
  cfg.validate();
  const SpectralGrid g = make_grid(cfg.L, cfg.M);
  ProfileState state{0.0, cfg.init.sample(g)};

  const double t_valid = validity_horizon(state.f_hat, g);
  if (cfg.T_end > t_valid && !override_horizon)
    throw horizon_error(t_valid, cfg.T_end);

  PhaseAccumulator acc(g, state);
  RhsWorkspace ws;

  struct Breakpoint {
    double t;
    bool snapshot;
  };
  std::vector<Breakpoint> bps;
  for (double ts : cfg.snapshot_times) bps.push_back({ts, true});
  if (bps.empty() || bps.back().t < cfg.T_end) bps.push_back({cfg.T_end, false});

  std::size_t step = 0;
  auto emit = [&](bool snap, bool fin) {
    StepEvent ev{g, state, acc, step, snap, fin};
    for (const auto& obs : observers) obs(ev);
  };
  emit(false, false);

  double t_anchor = 0.0;
  for (std::size_t bi = 0; bi < bps.size(); ++bi) {
    const double bp = bps[bi].t;
    const double span = bp - t_anchor;
    long K = static_cast<long>(std::ceil(span / cfg.dt - 1e-9));
    if (K < 1) K = 1;
    for (long j = 1; j <= K; ++j) {
      const double target = (j < K) ? t_anchor + j * cfg.dt : bp;
      const double h = target - state.t;
      rk4_step_inplace(state, cfg.coeffs, g, h, ws);
      state.t = target;  // pin against accumulation drift
      accumulate_phase(acc, state, cfg.coeffs.c0);
      ++step;
      const bool at_bp = (j == K);
      const bool is_snap = at_bp && bps[bi].snapshot;
      const bool is_fin = at_bp && (bi + 1 == bps.size());
      if (step % static_cast<std::size_t>(cfg.output_stride) == 0 || is_snap ||
          is_fin)
        emit(is_snap, is_fin);
    }
    t_anchor = bp;
  }
  return state;
}

}  // namespace fracnls
