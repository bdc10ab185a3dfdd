#include <immintrin.h>

#include <cstddef>

#include "lamimo/simd/kernels.hpp"

namespace lamimo::simd::avx2 {

void min_sq_distance(std::span<const double> xs, std::span<const double> ys,
                     std::span<const Vec2> sources, std::span<double> out) {
  const std::size_t n = xs.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d px = _mm256_loadu_pd(xs.data() + i);
    const __m256d py = _mm256_loadu_pd(ys.data() + i);
    __m256d best = _mm256_setzero_pd();
    for (std::size_t k = 0; k < sources.size(); ++k) {
      const __m256d dx = _mm256_sub_pd(px, _mm256_set1_pd(sources[k].x));
      const __m256d dy = _mm256_sub_pd(py, _mm256_set1_pd(sources[k].y));
      const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
      best = (k == 0) ? d2 : _mm256_min_pd(best, d2);
    }
    _mm256_storeu_pd(out.data() + i, best);
  }
  if (i < n) {
    scalar::min_sq_distance(xs.subspan(i), ys.subspan(i), sources, out.subspan(i));
  }
}

}  // namespace lamimo::simd::avx2
