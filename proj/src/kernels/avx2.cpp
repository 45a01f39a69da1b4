// Compiled with -mavx2 -mfma; only reached when CPUID reports both.

#include "curv4/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>
#endif

namespace curv4::kernels::avx2 {

#if defined(__AVX2__) && defined(__FMA__)

void plane_quadratic_forms(const Quadric6& q, const PlaneBatch& planes, std::span<double> out) {
  const std::size_t n = planes.size();
  __m256d qv[36];
  for (int k = 0; k < 36; ++k) qv[k] = _mm256_set1_pd(q[k]);

  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d u0 = _mm256_loadu_pd(planes.u[0].data() + i);
    const __m256d u1 = _mm256_loadu_pd(planes.u[1].data() + i);
    const __m256d u2 = _mm256_loadu_pd(planes.u[2].data() + i);
    const __m256d u3 = _mm256_loadu_pd(planes.u[3].data() + i);
    const __m256d v0 = _mm256_loadu_pd(planes.v[0].data() + i);
    const __m256d v1 = _mm256_loadu_pd(planes.v[1].data() + i);
    const __m256d v2 = _mm256_loadu_pd(planes.v[2].data() + i);
    const __m256d v3 = _mm256_loadu_pd(planes.v[3].data() + i);

    __m256d x[6];
    x[0] = _mm256_fmsub_pd(u0, v1, _mm256_mul_pd(u1, v0));
    x[1] = _mm256_fmsub_pd(u0, v2, _mm256_mul_pd(u2, v0));
    x[2] = _mm256_fmsub_pd(u0, v3, _mm256_mul_pd(u3, v0));
    x[3] = _mm256_fmsub_pd(u2, v3, _mm256_mul_pd(u3, v2));
    x[4] = _mm256_fmsub_pd(u3, v1, _mm256_mul_pd(u1, v3));
    x[5] = _mm256_fmsub_pd(u1, v2, _mm256_mul_pd(u2, v1));

    __m256d acc = _mm256_setzero_pd();
    for (int a = 0; a < 6; ++a) {
      __m256d row = _mm256_mul_pd(qv[a * 6], x[0]);
      for (int b = 1; b < 6; ++b) row = _mm256_fmadd_pd(qv[a * 6 + b], x[b], row);
      acc = _mm256_fmadd_pd(x[a], row, acc);
    }
    _mm256_storeu_pd(out.data() + i, acc);
  }
  if (i < n) {
    PlaneBatch tail;
    for (int k = 0; k < 4; ++k) {
      tail.u[k] = planes.u[k].subspan(i);
      tail.v[k] = planes.v[k].subspan(i);
    }
    scalar::plane_quadratic_forms(q, tail, out.subspan(i));
  }
}

#else

void plane_quadratic_forms(const Quadric6& q, const PlaneBatch& planes, std::span<double> out) {
  scalar::plane_quadratic_forms(q, planes, out);
}

#endif

}  // namespace curv4::kernels::avx2
