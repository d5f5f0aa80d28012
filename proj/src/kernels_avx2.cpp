#include "fracnls/kernels.hpp"

#include <cstdlib>

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

// Complex doubles are packed two per __m256d as [re0, im0, re1, im1].

namespace fracnls::kernels {
namespace {

inline __m256d cmul_v(__m256d a, __m256d b) {
  // (ar+i*ai)*(br+i*bi): fmaddsub gives even lanes a*bre - t, odd a*bre + t.
  const __m256d bre = _mm256_movedup_pd(b);
  const __m256d bim = _mm256_permute_pd(b, 0xF);
  const __m256d asw = _mm256_permute_pd(a, 0x5);
  return _mm256_fmaddsub_pd(a, bre, _mm256_mul_pd(asw, bim));
}

inline __m256d cmul_conj_v(__m256d a, __m256d b) {
  // a*conj(b): even lanes ar*br + ai*bi, odd lanes ai*br - ar*bi.
  const __m256d bre = _mm256_movedup_pd(b);
  const __m256d bim = _mm256_permute_pd(b, 0xF);
  const __m256d asw = _mm256_permute_pd(a, 0x5);
  return _mm256_fmsubadd_pd(a, bre, _mm256_mul_pd(asw, bim));
}

inline __m256d conj_v(__m256d a) {
  const __m256d signs = _mm256_setr_pd(0.0, -0.0, 0.0, -0.0);
  return _mm256_xor_pd(a, signs);
}

// |z|^2 duplicated into both lanes of each pair: [m0, m0, m1, m1]
inline __m256d norm2_dup_v(__m256d a) {
  const __m256d sq = _mm256_mul_pd(a, a);
  return _mm256_add_pd(sq, _mm256_permute_pd(sq, 0x5));
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double hmax(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(m, _mm_unpackhi_pd(m, m)));
}

void cubic_nl_a(const cd* u, cd* out, std::size_t n,
                double c0, cd c1, cd c2, cd c3) {
  const double* up = reinterpret_cast<const double*>(u);
  double* op = reinterpret_cast<double*>(out);
  const std::size_t n2 = n / 2 * 2;
  const bool gauge_only = (c1 == cd{} && c2 == cd{} && c3 == cd{});
  const __m256d c0v = _mm256_set1_pd(c0);
  if (gauge_only) {
    for (std::size_t i = 0; i < n2; i += 2) {
      const __m256d uv = _mm256_loadu_pd(up + 2 * i);
      const __m256d m2 = norm2_dup_v(uv);
      _mm256_storeu_pd(op + 2 * i,
                       _mm256_mul_pd(_mm256_mul_pd(c0v, m2), uv));
    }
  } else {
    const __m256d c1v = _mm256_setr_pd(c1.real(), c1.imag(), c1.real(), c1.imag());
    const __m256d c2v = _mm256_setr_pd(c2.real(), c2.imag(), c2.real(), c2.imag());
    const __m256d c3v = _mm256_setr_pd(c3.real(), c3.imag(), c3.real(), c3.imag());
    for (std::size_t i = 0; i < n2; i += 2) {
      const __m256d uv = _mm256_loadu_pd(up + 2 * i);
      const __m256d m2 = norm2_dup_v(uv);
      const __m256d u3 = cmul_v(cmul_v(uv, uv), uv);
      __m256d acc = _mm256_mul_pd(_mm256_mul_pd(c0v, m2), uv);
      acc = _mm256_add_pd(acc, cmul_v(u3, c1v));
      acc = _mm256_add_pd(acc, _mm256_mul_pd(m2, cmul_v(conj_v(uv), c2v)));
      acc = _mm256_add_pd(acc, cmul_v(conj_v(u3), c3v));
      _mm256_storeu_pd(op + 2 * i, acc);
    }
  }
  if (n2 < n) scalar_backend().cubic_nl(u + n2, out + n2, n - n2, c0, c1, c2, c3);
}

void cmul_a(const cd* a, const cd* b, cd* out, std::size_t n) {
  const double* ap = reinterpret_cast<const double*>(a);
  const double* bp = reinterpret_cast<const double*>(b);
  double* op = reinterpret_cast<double*>(out);
  const std::size_t n2 = n / 2 * 2;
  for (std::size_t i = 0; i < n2; i += 2)
    _mm256_storeu_pd(op + 2 * i, cmul_v(_mm256_loadu_pd(ap + 2 * i),
                                        _mm256_loadu_pd(bp + 2 * i)));
  if (n2 < n) out[n2] = a[n2] * b[n2];
}

void cmul_conj_a(const cd* a, const cd* b, cd* out, std::size_t n) {
  const double* ap = reinterpret_cast<const double*>(a);
  const double* bp = reinterpret_cast<const double*>(b);
  double* op = reinterpret_cast<double*>(out);
  const std::size_t n2 = n / 2 * 2;
  for (std::size_t i = 0; i < n2; i += 2)
    _mm256_storeu_pd(op + 2 * i, cmul_conj_v(_mm256_loadu_pd(ap + 2 * i),
                                             _mm256_loadu_pd(bp + 2 * i)));
  if (n2 < n) out[n2] = a[n2] * std::conj(b[n2]);
}

void clincomb_a(cd* out, const cd* a, const cd* b, double s, std::size_t n) {
  const double* ap = reinterpret_cast<const double*>(a);
  const double* bp = reinterpret_cast<const double*>(b);
  double* op = reinterpret_cast<double*>(out);
  const __m256d sv = _mm256_set1_pd(s);
  const std::size_t n2 = n / 2 * 2;
  for (std::size_t i = 0; i < n2; i += 2)
    _mm256_storeu_pd(op + 2 * i,
                     _mm256_fmadd_pd(sv, _mm256_loadu_pd(bp + 2 * i),
                                     _mm256_loadu_pd(ap + 2 * i)));
  if (n2 < n) out[n2] = a[n2] + s * b[n2];
}

void caxpy_a(cd* y, const cd* x, double s, std::size_t n) {
  clincomb_a(y, y, x, s, n);
}

// Compensated (Kahan) accumulation per lane; the quadrature engines sum up
// to a few 1e9 terms through this kernel.
cd cdot_nc_a(const cd* a, const cd* b, std::size_t n) {
  const double* ap = reinterpret_cast<const double*>(a);
  const double* bp = reinterpret_cast<const double*>(b);
  __m256d acc0 = _mm256_setzero_pd(), comp0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd(), comp1 = _mm256_setzero_pd();
  const std::size_t n4 = n / 4 * 4;
  for (std::size_t i = 0; i < n4; i += 4) {
    const __m256d p0 = cmul_v(_mm256_loadu_pd(ap + 2 * i),
                              _mm256_loadu_pd(bp + 2 * i));
    const __m256d y0 = _mm256_sub_pd(p0, comp0);
    const __m256d t0 = _mm256_add_pd(acc0, y0);
    comp0 = _mm256_sub_pd(_mm256_sub_pd(t0, acc0), y0);
    acc0 = t0;
    const __m256d p1 = cmul_v(_mm256_loadu_pd(ap + 2 * i + 4),
                              _mm256_loadu_pd(bp + 2 * i + 4));
    const __m256d y1 = _mm256_sub_pd(p1, comp1);
    const __m256d t1 = _mm256_add_pd(acc1, y1);
    comp1 = _mm256_sub_pd(_mm256_sub_pd(t1, acc1), y1);
    acc1 = t1;
  }
  const __m256d acc = _mm256_add_pd(acc0, acc1);
  // fold the two complex lanes
  const __m128d lo = _mm256_castpd256_pd128(acc);
  const __m128d hi = _mm256_extractf128_pd(acc, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  cd result{_mm_cvtsd_f64(s), _mm_cvtsd_f64(_mm_unpackhi_pd(s, s))};
  for (std::size_t i = n4; i < n; ++i) result += a[i] * b[i];
  return result;
}

double wsumsq_a(const cd* z, const double* w, std::size_t n) {
  const double* zp = reinterpret_cast<const double*>(z);
  __m256d acc = _mm256_setzero_pd();
  const std::size_t n2 = n / 2 * 2;
  if (w) {
    for (std::size_t i = 0; i < n2; i += 2) {
      const __m256d zv = _mm256_loadu_pd(zp + 2 * i);
      const __m128d wv = _mm_loadu_pd(w + i);
      const __m256d wd = _mm256_set_m128d(_mm_unpackhi_pd(wv, wv),
                                          _mm_unpacklo_pd(wv, wv));
      acc = _mm256_fmadd_pd(_mm256_mul_pd(zv, zv), wd, acc);
    }
  } else {
    for (std::size_t i = 0; i < n2; i += 2) {
      const __m256d zv = _mm256_loadu_pd(zp + 2 * i);
      acc = _mm256_fmadd_pd(zv, zv, acc);
    }
  }
  double total = hsum(acc);
  for (std::size_t i = n2; i < n; ++i)
    total += (w ? w[i] : 1.0) * std::norm(z[i]);
  return total;
}

double wabsmax2_a(const cd* z, const double* w2, std::size_t n,
                  double floor2) {
  const double* zp = reinterpret_cast<const double*>(z);
  __m256d best = _mm256_setzero_pd();
  const __m256d fl = _mm256_set1_pd(floor2);
  const std::size_t n2 = n / 2 * 2;
  for (std::size_t i = 0; i < n2; i += 2) {
    const __m256d zv = _mm256_loadu_pd(zp + 2 * i);
    const __m256d m2 = norm2_dup_v(zv);
    __m256d v = m2;
    if (w2) {
      const __m128d wv = _mm_loadu_pd(w2 + i);
      const __m256d wd = _mm256_set_m128d(_mm_unpackhi_pd(wv, wv),
                                          _mm_unpacklo_pd(wv, wv));
      v = _mm256_mul_pd(m2, wd);
    }
    const __m256d keep = _mm256_cmp_pd(m2, fl, _CMP_GE_OQ);
    best = _mm256_max_pd(best, _mm256_and_pd(v, keep));
  }
  double result = hmax(best);
  for (std::size_t i = n2; i < n; ++i) {
    const double m2 = std::norm(z[i]);
    if (m2 < floor2) continue;
    const double v = w2 ? w2[i] * m2 : m2;
    if (v > result) result = v;
  }
  return result;
}

}  // namespace

const Backend& avx2_backend() {
  static const Backend b{"avx2",    cubic_nl_a, cmul_a,    cmul_conj_a,
                         clincomb_a, caxpy_a,   cdot_nc_a, wsumsq_a,
                         wabsmax2_a};
  return b;
}

}  // namespace fracnls::kernels

#else  // non-x86 build or AVX2 disabled: never dispatched, keep the symbol.

namespace fracnls::kernels {
const Backend& avx2_backend() { std::abort(); }
}  // namespace fracnls::kernels

#endif
