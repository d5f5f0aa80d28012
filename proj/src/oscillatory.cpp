#include "fracnls/oscillatory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fracnls/diagnostics.hpp"
#include "fracnls/kernels.hpp"

namespace fracnls {

accuracy_error::accuracy_error(const std::string& msg,
                               double suggested_resolution)
    : std::runtime_error(msg), suggested_(suggested_resolution) {}

resource_error::resource_error(const std::string& msg)
    : std::runtime_error(msg) {}

double phase_Phi(double xi, double eta, double sigma) {
  return lambda_symbol(xi) - lambda_symbol(xi + eta) -
         lambda_symbol(xi + sigma) + lambda_symbol(xi + eta + sigma);
}

namespace {

constexpr std::size_t kMaxLatticePoints = 300000;

struct SepResult {
  cd full;
  cd half;
};

// full = sum_{i,j} A[i] B[j] C[i+j]; half restricts to even indices, which
// keeps both lattice endpoints (sizes are odd), so the trapezoid endpoint
// weights baked into A and B stay valid on the coarse sublattice.
struct KahanCd {
  cd sum{}, comp{};
  void add(cd v) {
    const cd y = v - comp;
    const cd t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

SepResult separable_sum(const std::vector<cd>& A, const std::vector<cd>& B,
                        const std::vector<cd>& C) {
  const auto& K = kernels::active();
  const std::size_t nA = A.size(), nB = B.size();
  KahanCd full;
  for (std::size_t i = 0; i < nA; ++i)
    full.add(A[i] * K.cdot_nc(B.data(), C.data() + i, nB));

  std::vector<cd> Bh((nB + 1) / 2), Ch((C.size() + 1) / 2);
  for (std::size_t j = 0; j < Bh.size(); ++j) Bh[j] = B[2 * j];
  for (std::size_t m = 0; m < Ch.size(); ++m) Ch[m] = C[2 * m];
  KahanCd half;
  for (std::size_t i = 0; i < (nA + 1) / 2; ++i)
    half.add(A[2 * i] * K.cdot_nc(Bh.data(), Ch.data() + i, Bh.size()));
  return {full.sum, half.sum};
}

inline cd cis(double a) { return {std::cos(a), std::sin(a)}; }

// The quadratic lattice phases reach ~N^2 radians; reducing them mod 2*pi in
// extended precision keeps the evaluated weights accurate to ~1e-15 rad,
// which the pair-integral identity check needs at large N.
inline cd cis_reduced(long double a) {
  const long double tau = 6.283185307179586476925286766559L;
  const double r = static_cast<double>(fmodl(a, tau));
  return {std::cos(r), std::sin(r)};
}

std::size_t odd_at_least(double n) {
  std::size_t v = static_cast<std::size_t>(std::ceil(std::max(n, 3.0)));
  return v | 1;
}

}  // namespace

cd gaussian_pair_integral(double N, PairVariant variant) {
  if (!(N >= 0.25))
    throw std::invalid_argument("gaussian_pair_integral: need N >= 1/4");
  if (variant == PairVariant::gaussian) {
    return cd{2.0 * M_PI / std::sqrt(1.0 + 4.0 / (N * N * N * N)), 0.0};
  }
  // e^{-ixy} = e^{-i(x+y)^2/2} e^{+ix^2/2} e^{+iy^2/2} on a shared lattice
  const double half_span = 1.6 * N;
  const double grad = 2.0 * half_span;  // |d/ds (s^2/2)| on the sum lattice
  const double qres = 8.0;
  const std::size_t n =
      std::max<std::size_t>(513, odd_at_least(2.0 * half_span * qres * grad /
                                              (2.0 * M_PI)));
  if (n > kMaxLatticePoints)
    throw resource_error(
        "gaussian_pair_integral: cutoff variant needs too many quadrature "
        "points at this N; use the gaussian variant");
  const long double hl =
      2.0L * static_cast<long double>(half_span) / (n - 1);
  const long double x0l = -static_cast<long double>(half_span);
  std::vector<cd> A(n), C(2 * n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const long double x = x0l + static_cast<long double>(i) * hl;
    const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
    A[i] = w * bump(static_cast<double>(x) / N) * cis_reduced(0.5L * x * x);
  }
  for (std::size_t m = 0; m < C.size(); ++m) {
    const long double sm = 2.0L * x0l + static_cast<long double>(m) * hl;
    C[m] = cis_reduced(-0.5L * sm * sm);
  }
  const SepResult r = separable_sum(A, A, C);
  const double h = static_cast<double>(hl);
  return r.full * (h * h);
}

namespace {

struct TrilinearLattice {
  double lo;
  double h;
  std::size_t n;
};

TrilinearLattice plan_trilinear(const OscillatoryProbe& p) {
  if (!(p.quad_resolution >= 8.0))
    throw std::invalid_argument("probe: quad_resolution must be >= 8");
  const auto [slo, shi] = p.profile.support(1e-12);
  const double lo = slo - p.xi;
  const double span = shi - slo;
  if (!(span > 0.0))
    throw std::invalid_argument("probe: empty profile support");

  // Oscillation rate s*|Lambda'| where the amplitude matters. Lambda' blows
  // up at zeta = 0; cells inside the exclusion sliver are bounded-amplitude
  // and nearly cancel, and the half-resolution estimate audits them.
  const double zeta_floor = std::max(1e-6, 5e-3 * span);
  double amp_max = 0.0;
  const int scan = 4096;
  std::vector<double> amps(scan + 1);
  for (int i = 0; i <= scan; ++i) {
    const double zeta = slo + span * i / scan;
    amps[i] = std::abs(p.profile.eval_fhat(zeta));
    amp_max = std::max(amp_max, amps[i]);
  }
  double grad = 0.0;
  for (int i = 0; i <= scan; ++i) {
    if (amps[i] < 1e-6 * amp_max) continue;
    const double azeta = std::abs(slo + span * i / scan);
    if (azeta < zeta_floor) continue;
    grad = std::max(grad, std::abs(p.s) / (2.0 * std::sqrt(azeta)));
  }
  const double n_osc = span * grad * p.quad_resolution / (2.0 * M_PI);
  const double n_amp = 16.0 * span / p.profile.width;
  const std::size_t n =
      std::max<std::size_t>(513, odd_at_least(std::max(n_osc, n_amp)));
  if (n > kMaxLatticePoints)
    throw resource_error(
        "trilinear_integral: point budget exceeded; lower s or the support");
  return {lo, span / static_cast<double>(n - 1), n};
}

}  // namespace

TrilinearResult trilinear_integral(const OscillatoryProbe& p) {
  const TrilinearLattice lat = plan_trilinear(p);
  const std::size_t n = lat.n;
  std::vector<cd> A(n), C(2 * n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double eta = lat.lo + static_cast<double>(i) * lat.h;
    const double zeta = p.xi + eta;
    const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
    A[i] = w * p.profile.eval_fhat(zeta) * cis(-p.s * lambda_symbol(zeta));
  }
  for (std::size_t m = 0; m < C.size(); ++m) {
    const double zeta = p.xi + 2.0 * lat.lo + static_cast<double>(m) * lat.h;
    C[m] = std::conj(p.profile.eval_fhat(zeta)) *
           cis(p.s * lambda_symbol(zeta));
  }
  const SepResult r = separable_sum(A, A, C);
  const cd outer = cis(p.s * lambda_symbol(p.xi));
  const cd full = outer * r.full * (lat.h * lat.h);
  const cd half = outer * r.half * (4.0 * lat.h * lat.h);
  const double mag = std::abs(full);
  const double rel = (mag > 0.0) ? std::abs(full - half) / mag : 0.0;
  if (rel > 0.05)
    throw accuracy_error(
        "trilinear_integral: oscillation unresolved (half-resolution "
        "discrepancy above 5%); raise quad_resolution",
        2.0 * p.quad_resolution);
  return {full, rel};
}

StationaryPhaseResult stationary_phase_residual(const OscillatoryProbe& p) {
  const TrilinearResult tri = trilinear_integral(p);
  const cd f0 = p.profile.eval_fhat(p.xi);
  const double axi = std::abs(p.xi);
  const cd leading =
      8.0 * M_PI * axi * std::sqrt(axi) * std::norm(f0) * f0 / (p.s + 1.0);
  StationaryPhaseResult r;
  r.integral = tri.value;
  r.leading = leading;
  r.residual = std::abs(tri.value - leading);
  const double lm = std::abs(leading);
  r.rel_residual = (lm > 0.0) ? r.residual / lm
                              : std::numeric_limits<double>::infinity();
  r.quad_err = tri.rel_err_est;
  return r;
}

double linear_flow_sup(const InitialDataSpec& f, double t) {
  const auto [a, b] = f.support(1e-4);
  const double xi_hi = std::max(std::abs(a), std::abs(b)) + 1.0;
  double xi_a;
  if (a <= 0.0 && b >= 0.0)
    xi_a = 1e-3;
  else
    xi_a = std::max(1e-3, std::min(std::abs(a), std::abs(b)));
  const double X = 1.25 * std::abs(t) / (2.0 * std::sqrt(xi_a)) +
                   24.0 / f.width + 16.0;
  int M = 4096;
  const double wanted = 8.0 * X * xi_hi / M_PI;  // 4x oversampling
  while (M < wanted && M < (1 << 22)) M <<= 1;
  if (M < wanted)
    throw resource_error("linear_flow_sup: box too large to sample");
  const SpectralGrid g = make_grid(X, M);
  std::vector<cd> spectrum(g.M);
  for (int i = 0; i < g.M; ++i) spectrum[i] = f.eval_fhat(g.xi_nodes[i]);
  // e^{+it Lambda}: the propagator applies e^{-i t Lambda}
  const std::vector<cd> uhat = half_wave_propagator(spectrum, -t, g);
  const std::vector<cd> u = inverse_transform(uhat, g);
  return max_abs_refined(u);
}

DispersiveRatio dispersive_ratio(const InitialDataSpec& f, double t) {
  DispersiveRatio out;
  out.lhs = linear_flow_sup(f, t);

  const auto [a, b] = f.support(1e-9);
  double wsup = 0.0;
  const int scan = 200000;
  for (int i = 0; i <= scan; ++i) {
    const double xi = a + (b - a) * i / scan;
    wsup = std::max(wsup,
                    std::pow(std::abs(xi), 0.75) * std::abs(f.eval_fhat(xi)));
  }
  const SpectralGrid gref = make_grid(256.0, 16384);
  std::vector<cd> fh(gref.M);
  for (int i = 0; i < gref.M; ++i) fh[i] = f.eval_fhat(gref.xi_nodes[i]);
  const double wpart = weighted_norm_W(fh, gref);
  const double h2 = sobolev_norm(fh, 2, gref);

  const double at = std::abs(t);
  out.rhs = std::pow(1.0 + at, -0.5) * wsup +
            std::pow(1.0 + at, -0.625) * (wpart + h2);
  if (!(out.rhs > 0.0))
    throw std::invalid_argument("dispersive_ratio: zero input profile");
  out.ratio = out.lhs / out.rhs;
  return out;
}

}  // namespace fracnls
