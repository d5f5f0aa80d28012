#ifndef FRACNLS_TESTS_ORACLES_HPP
#define FRACNLS_TESTS_ORACLES_HPP

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "fracnls/evolution.hpp"
#include "fracnls/spectral.hpp"

// Test-side oracles, independent of the implementation paths they check.

namespace oracles {

using fracnls::cd;

// adaptive Simpson for complex integrands
inline cd simpson_rec(const std::function<cd(double)>& f, double a, double b,
                      cd fa, cd fm, cd fb, cd whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const cd flm = f(lm), frm = f(rm);
  const cd left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const cd right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline cd integrate(const std::function<cd(double)>& f, double a, double b,
                    double tol = 1e-11, int depth = 28) {
  const double m = 0.5 * (a + b);
  const cd fa = f(a), fm = f(m), fb = f(b);
  const cd whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth);
}

// random dealiased spectrum, reproducible from the seed
inline std::vector<cd> random_dealiased(const fracnls::SpectralGrid& g,
                                        std::mt19937_64& rng,
                                        double amp = 1.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cd> f(g.M);
  for (int i = 0; i < g.M; ++i) {
    const cd v{u(rng), u(rng)};
    f[i] = g.dealias_mask[i] ? amp * v : cd{};
  }
  return f;
}

// Direct Riemann-sum evaluation of the profile time derivative: the four
// trilinear integrals are summed over the frequency lattice wherever the
// integrand is nonzero (eta needs the doubled range since it is an
// intermediate frequency), with out-of-grid lookups treated as zero. This is
// the unaliased double sum; it must match the padded-transform evaluation.
inline std::vector<cd> brute_force_rhs(const fracnls::ProfileState& st,
                                       const fracnls::Coefficients& c,
                                       const fracnls::SpectralGrid& g) {
  const int M = g.M;
  const double dxi = g.dxi;
  auto lam = [&](int k) { return std::sqrt(std::abs(k * dxi)); };
  auto lookup = [&](int k) -> cd {
    if (k < -M / 2 || k >= M / 2) return {};
    return st.f_hat[k + M / 2];
  };
  auto lookup_bar = [&](int k) -> cd { return std::conj(lookup(-k)); };

  std::vector<cd> rhs(M);
  const double t = st.t;
  const double cell = dxi * dxi;
  for (int a = 0; a < M; ++a) {
    if (!g.dealias_mask[a]) {
      rhs[a] = cd{};
      continue;
    }
    const int kx = a - M / 2;
    cd I0{}, I1{}, I2{}, I3{};
    for (int ke = -M; ke <= M; ++ke) {
      for (int ks = -M / 2; ks < M / 2; ++ks) {
        const cd f1 = lookup(kx - ke);
        const cd f1b = lookup_bar(kx - ke);
        const cd f2 = lookup(ke - ks);
        const cd f2b = lookup_bar(ke - ks);
        const cd f3 = lookup(ks);
        const cd f3b = lookup_bar(ks);
        const double l_x = lam(kx), l_1 = lam(kx - ke), l_2 = lam(ke - ks),
                     l_3 = lam(ks);
        auto phase = [&](double sgn1, double sgn2, double sgn3) {
          const double ph = t * (l_x + sgn1 * l_1 + sgn2 * l_2 + sgn3 * l_3);
          return cd{std::cos(ph), std::sin(ph)};
        };
        if (f1 != cd{} && f2 != cd{} && f3b != cd{})
          I0 += phase(-1, -1, +1) * f1 * f2 * f3b;
        if (f1 != cd{} && f2 != cd{} && f3 != cd{})
          I1 += phase(-1, -1, -1) * f1 * f2 * f3;
        if (f1 != cd{} && f2b != cd{} && f3b != cd{})
          I2 += phase(-1, +1, +1) * f1 * f2b * f3b;
        if (f1b != cd{} && f2b != cd{} && f3b != cd{})
          I3 += phase(+1, +1, +1) * f1b * f2b * f3b;
      }
    }
    const cd bracket =
        (c.c0 * I0 + c.c1 * I1 + c.c2 * I2 + c.c3 * I3) * cell /
        (4.0 * M_PI * M_PI);
    rhs[a] = cd{bracket.imag(), -bracket.real()};  // -i * bracket
  }
  return rhs;
}

inline double rel_sup_diff(const std::vector<cd>& a, const std::vector<cd>& b) {
  double scale = 0.0, diff = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    scale = std::max(scale, std::abs(a[i]));
    diff = std::max(diff, std::abs(a[i] - b[i]));
  }
  return scale > 0.0 ? diff / scale : diff;
}

}  // namespace oracles

#endif
