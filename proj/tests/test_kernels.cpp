#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "fracnls/kernels.hpp"

using namespace fracnls;
using kernels::Backend;
using kernels::cd;

namespace {

std::vector<cd> random_cvec(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cd> v(n);
  for (auto& z : v) z = cd{u(rng), u(rng)};
  return v;
}

std::vector<double> random_rvec(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 3.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

const std::size_t kSizes[] = {1, 2, 3, 5, 8, 64, 1023, 4096};

}  // namespace

TEST_CASE("cubic nonlinearity semantics") {
  const auto& K = kernels::scalar_backend();
  std::vector<cd> u{cd{0.3, -0.7}, cd{1.0, 2.0}, cd{0.0, 0.0}};
  std::vector<cd> out(u.size());

  K.cubic_nl(u.data(), out.data(), u.size(), 1.0, {}, {}, {});
  for (std::size_t i = 0; i < u.size(); ++i)
    CHECK(std::abs(out[i] - std::norm(u[i]) * u[i]) < 1e-15);

  K.cubic_nl(u.data(), out.data(), u.size(), 0.0, cd{1.0, 0.0}, {}, {});
  for (std::size_t i = 0; i < u.size(); ++i)
    CHECK(std::abs(out[i] - u[i] * u[i] * u[i]) < 1e-15);

  K.cubic_nl(u.data(), out.data(), u.size(), 0.0, {}, cd{1.0, 0.0}, {});
  for (std::size_t i = 0; i < u.size(); ++i)
    CHECK(std::abs(out[i] - u[i] * std::conj(u[i]) * std::conj(u[i])) < 1e-15);

  K.cubic_nl(u.data(), out.data(), u.size(), 0.0, {}, {}, cd{0.0, 2.0});
  for (std::size_t i = 0; i < u.size(); ++i)
    CHECK(std::abs(out[i] - cd{0.0, 2.0} * std::pow(std::conj(u[i]), 3)) <
          1e-14);
}

TEST_CASE("reduction kernels against straightforward loops") {
  std::mt19937_64 rng(7);
  const auto& K = kernels::scalar_backend();
  auto a = random_cvec(301, rng);
  auto b = random_cvec(301, rng);
  auto w = random_rvec(301, rng);

  cd dot{};
  for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
  CHECK(std::abs(K.cdot_nc(a.data(), b.data(), a.size()) - dot) < 1e-12);

  double ws = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) ws += w[i] * std::norm(a[i]);
  CHECK(K.wsumsq(a.data(), w.data(), a.size()) == doctest::Approx(ws));

  double wm = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    wm = std::max(wm, w[i] * std::norm(a[i]));
  CHECK(K.wabsmax2(a.data(), w.data(), a.size(), 0.0) == doctest::Approx(wm));
}

TEST_CASE("wabsmax2 honors the floor") {
  const auto& K = kernels::scalar_backend();
  std::vector<cd> z{cd{1e-9, 0.0}, cd{0.5, 0.0}, cd{2e-9, 0.0}};
  std::vector<double> w2{1e30, 1.0, 1e30};
  // tiny entries carry huge weights but sit below the floor
  const double floor2 = 1e-8;
  CHECK(K.wabsmax2(z.data(), w2.data(), z.size(), floor2) ==
        doctest::Approx(0.25));
  CHECK(K.wabsmax2(z.data(), nullptr, z.size(), 1e9) == 0.0);
}

TEST_CASE("avx2 backend matches scalar reference") {
  if (!kernels::avx2_supported()) {
    MESSAGE("AVX2 not available; skipping equivalence tests");
    return;
  }
  const Backend& S = kernels::scalar_backend();
  const Backend& V = kernels::avx2_backend();
  std::mt19937_64 rng(42);

  for (std::size_t n : kSizes) {
    auto u = random_cvec(n, rng);
    auto b = random_cvec(n, rng);
    auto w = random_rvec(n, rng);
    std::vector<cd> outS(n), outV(n);

    S.cubic_nl(u.data(), outS.data(), n, 0.8, cd{0.1, -0.2}, cd{0.3, 0.4},
               cd{-0.5, 0.6});
    V.cubic_nl(u.data(), outV.data(), n, 0.8, cd{0.1, -0.2}, cd{0.3, 0.4},
               cd{-0.5, 0.6});
    for (std::size_t i = 0; i < n; ++i)
      CHECK(std::abs(outS[i] - outV[i]) < 1e-14);

    // gauge-invariant fast path
    S.cubic_nl(u.data(), outS.data(), n, 1.0, {}, {}, {});
    V.cubic_nl(u.data(), outV.data(), n, 1.0, {}, {}, {});
    for (std::size_t i = 0; i < n; ++i)
      CHECK(std::abs(outS[i] - outV[i]) < 1e-15);

    S.cmul(u.data(), b.data(), outS.data(), n);
    V.cmul(u.data(), b.data(), outV.data(), n);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(std::abs(outS[i] - outV[i]) < 1e-15);

    S.cmul_conj(u.data(), b.data(), outS.data(), n);
    V.cmul_conj(u.data(), b.data(), outV.data(), n);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(std::abs(outS[i] - outV[i]) < 1e-15);

    S.clincomb(outS.data(), u.data(), b.data(), 0.37, n);
    V.clincomb(outV.data(), u.data(), b.data(), 0.37, n);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(std::abs(outS[i] - outV[i]) < 1e-15);

    outS = u;
    outV = u;
    S.caxpy(outS.data(), b.data(), -1.3, n);
    V.caxpy(outV.data(), b.data(), -1.3, n);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(std::abs(outS[i] - outV[i]) < 1e-15);

    double dot_scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) dot_scale += std::abs(u[i] * b[i]);
    CHECK(std::abs(S.cdot_nc(u.data(), b.data(), n) -
                   V.cdot_nc(u.data(), b.data(), n)) <=
          1e-12 * std::max(dot_scale, 1.0));

    CHECK(S.wsumsq(u.data(), w.data(), n) ==
          doctest::Approx(V.wsumsq(u.data(), w.data(), n)).epsilon(1e-12));
    CHECK(S.wsumsq(u.data(), nullptr, n) ==
          doctest::Approx(V.wsumsq(u.data(), nullptr, n)).epsilon(1e-12));
    CHECK(S.wabsmax2(u.data(), w.data(), n, 0.3) ==
          doctest::Approx(V.wabsmax2(u.data(), w.data(), n, 0.3)));
    CHECK(S.wabsmax2(u.data(), nullptr, n, 0.0) ==
          doctest::Approx(V.wabsmax2(u.data(), nullptr, n, 0.0)));
  }
}

TEST_CASE("dispatch picks a valid backend") {
  const Backend& K = kernels::active();
  const bool is_scalar = &K == &kernels::scalar_backend();
  const bool is_avx2 =
      kernels::avx2_supported() && &K == &kernels::avx2_backend();
  CHECK((is_scalar || is_avx2));
  MESSAGE("active kernel backend: ", K.name);
}
