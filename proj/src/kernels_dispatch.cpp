#include "fracnls/kernels.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace fracnls::kernels {

bool avx2_supported() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Backend& active() {
  static const Backend* chosen = [] {
    if (const char* env = std::getenv("FRACNLS_KERNEL")) {
      if (std::strcmp(env, "scalar") == 0) return &scalar_backend();
      if (std::strcmp(env, "avx2") == 0) {
        if (avx2_supported()) return &avx2_backend();
        std::fprintf(stderr,
                     "fracnls: FRACNLS_KERNEL=avx2 requested but CPU lacks "
                     "AVX2+FMA, falling back to scalar\n");
        return &scalar_backend();
      }
      std::fprintf(stderr, "fracnls: unknown FRACNLS_KERNEL=%s, ignoring\n",
                   env);
    }
    return avx2_supported() ? &avx2_backend() : &scalar_backend();
  }();
  return *chosen;
}

}  // namespace fracnls::kernels
