#include "fracnls/kernels.hpp"

namespace fracnls::kernels {
namespace {

void cubic_nl_s(const cd* u, cd* out, std::size_t n,
                double c0, cd c1, cd c2, cd c3) {
  const bool gauge_only = (c1 == cd{} && c2 == cd{} && c3 == cd{});
  if (gauge_only) {
    for (std::size_t i = 0; i < n; ++i) {
      const double m2 = std::norm(u[i]);
      out[i] = (c0 * m2) * u[i];
    }
    return;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const cd ui = u[i];
    const double m2 = std::norm(ui);
    const cd u3 = ui * ui * ui;
    // u*conj(u)^2 == |u|^2*conj(u)
    out[i] = (c0 * m2) * ui + c1 * u3 + (c2 * m2) * std::conj(ui) +
             c3 * std::conj(u3);
  }
}

void cmul_s(const cd* a, const cd* b, cd* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void cmul_conj_s(const cd* a, const cd* b, cd* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * std::conj(b[i]);
}

void clincomb_s(cd* out, const cd* a, const cd* b, double s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + s * b[i];
}

void caxpy_s(cd* y, const cd* x, double s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += s * x[i];
}

// Compensated accumulation: the quadrature engines run this over up to a
// few 1e9 terms, where a plain sum's roundoff would mask the small tails
// being measured.
cd cdot_nc_s(const cd* a, const cd* b, std::size_t n) {
  double re = 0.0, im = 0.0, cre = 0.0, cim = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    const double pr = ar * br - ai * bi;
    const double pi = ar * bi + ai * br;
    const double yr = pr - cre;
    const double tr = re + yr;
    cre = (tr - re) - yr;
    re = tr;
    const double yi = pi - cim;
    const double ti = im + yi;
    cim = (ti - im) - yi;
    im = ti;
  }
  return {re, im};
}

double wsumsq_s(const cd* z, const double* w, std::size_t n) {
  double acc = 0.0;
  if (w) {
    for (std::size_t i = 0; i < n; ++i) acc += w[i] * std::norm(z[i]);
  } else {
    for (std::size_t i = 0; i < n; ++i) acc += std::norm(z[i]);
  }
  return acc;
}

double wabsmax2_s(const cd* z, const double* w2, std::size_t n,
                  double floor2) {
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double m2 = std::norm(z[i]);
    if (m2 < floor2) continue;
    const double v = w2 ? w2[i] * m2 : m2;
    if (v > best) best = v;
  }
  return best;
}

}  // namespace

const Backend& scalar_backend() {
  static const Backend b{"scalar",  cubic_nl_s, cmul_s,   cmul_conj_s,
                         clincomb_s, caxpy_s,   cdot_nc_s, wsumsq_s,
                         wabsmax2_s};
  return b;
}

}  // namespace fracnls::kernels
