#include <atomic>

#include "curv4/kernels.hpp"

namespace curv4::kernels {

namespace {

bool cpu_has_avx2_fma() {
#if defined(CURV4_HAVE_AVX2_KERNELS) && (defined(__x86_64__) || defined(__i386__)) && defined(__GNUC__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa detect() { return cpu_has_avx2_fma() ? Isa::avx2 : Isa::scalar; }

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "?";
}

bool isa_available(Isa isa) { return isa == Isa::scalar || cpu_has_avx2_fma(); }

Isa active_isa() { return current().load(std::memory_order_relaxed); }

bool set_active_isa(Isa isa) {
  if (!isa_available(isa)) return false;
  current().store(isa, std::memory_order_relaxed);
  return true;
}

void plane_quadratic_forms(const Quadric6& q, const PlaneBatch& planes, std::span<double> out) {
  if (active_isa() == Isa::avx2) {
    avx2::plane_quadratic_forms(q, planes, out);
  } else {
    scalar::plane_quadratic_forms(q, planes, out);
  }
}

}  // namespace curv4::kernels
