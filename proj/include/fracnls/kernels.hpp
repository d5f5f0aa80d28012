#ifndef FRACNLS_KERNELS_HPP
#define FRACNLS_KERNELS_HPP

#include <complex>
#include <cstddef>

// Data-parallel inner loops used by the spectral solver and the oscillatory
// quadratures. Every kernel exists in a scalar reference form and, on x86
// with AVX2+FMA, in a vectorized form. The two are equivalence-tested; the
// active backend is picked once at startup (cpuid, overridable through the
// FRACNLS_KERNEL=scalar|avx2 environment variable).

namespace fracnls::kernels {

using cd = std::complex<double>;

struct Backend {
  const char* name;

  // out[i] = c0*|u|^2*u + c1*u^3 + c2*u*conj(u)^2 + c3*conj(u)^3
  void (*cubic_nl)(const cd* u, cd* out, std::size_t n,
                   double c0, cd c1, cd c2, cd c3);

  // out[i] = a[i]*b[i]
  void (*cmul)(const cd* a, const cd* b, cd* out, std::size_t n);

  // out[i] = a[i]*conj(b[i])
  void (*cmul_conj)(const cd* a, const cd* b, cd* out, std::size_t n);

  // out[i] = a[i] + s*b[i]   (s real; out may alias a)
  void (*clincomb)(cd* out, const cd* a, const cd* b, double s, std::size_t n);

  // y[i] += s*x[i]           (s real)
  void (*caxpy)(cd* y, const cd* x, double s, std::size_t n);

  // sum_i a[i]*b[i], no conjugation
  cd (*cdot_nc)(const cd* a, const cd* b, std::size_t n);

  // sum_i w[i]*|z[i]|^2 ; w == nullptr means unit weights
  double (*wsumsq)(const cd* z, const double* w, std::size_t n);

  // max_i w2[i]*|z[i]|^2 over entries with |z[i]|^2 >= floor2
  // (w2 == nullptr means unit weights; returns 0 if no entry qualifies)
  double (*wabsmax2)(const cd* z, const double* w2, std::size_t n,
                     double floor2);
};

const Backend& scalar_backend();
const Backend& avx2_backend();  // only valid to use when avx2_supported()
bool avx2_supported();

// Backend selected at first use; stable for the lifetime of the process.
const Backend& active();

}  // namespace fracnls::kernels

#endif
