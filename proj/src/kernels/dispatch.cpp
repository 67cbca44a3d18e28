#include <cstdlib>
#include <string>

#include "corridor/kernels.hpp"

namespace corridor::kernels {

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    case Backend::Neon: return "neon";
  }
  return "unknown";
}

bool backend_available(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return true;
    case Backend::Avx2:
#if defined(CORRIDOR_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Backend::Neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table(Backend b) {
  static const KernelTable scalar_table{Backend::Scalar, scalar::threshold_u8, scalar::erode_vertical,
                                        scalar::union_exit_distance};
#if defined(CORRIDOR_HAVE_AVX2)
  static const KernelTable avx2_table{Backend::Avx2, avx2::threshold_u8, avx2::erode_vertical,
                                      avx2::union_exit_distance};
  if (b == Backend::Avx2 && backend_available(b)) return avx2_table;
#endif
#if defined(__aarch64__)
  static const KernelTable neon_table{Backend::Neon, neon::threshold_u8, neon::erode_vertical,
                                      neon::union_exit_distance};
  if (b == Backend::Neon) return neon_table;
#endif
  return scalar_table;
}

Backend detect_backend() {
  if (const char* env = std::getenv("CORRIDOR_KERNELS")) {
    const std::string v(env);
    if (v == "scalar") return Backend::Scalar;
    if (v == "avx2" && backend_available(Backend::Avx2)) return Backend::Avx2;
    if (v == "neon" && backend_available(Backend::Neon)) return Backend::Neon;
  }
  if (backend_available(Backend::Avx2)) return Backend::Avx2;
  if (backend_available(Backend::Neon)) return Backend::Neon;
  return Backend::Scalar;
}

const KernelTable& active() {
  static const KernelTable& t = table(detect_backend());
  return t;
}

}  // namespace corridor::kernels
