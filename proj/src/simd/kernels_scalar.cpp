#include <cstddef>

#include "lamimo/simd/kernels.hpp"

namespace lamimo::simd::scalar {

void min_sq_distance(std::span<const double> xs, std::span<const double> ys,
                     std::span<const Vec2> sources, std::span<double> out) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double best = 0.0;
    for (std::size_t k = 0; k < sources.size(); ++k) {
      const double dx = xs[i] - sources[k].x;
      const double dy = ys[i] - sources[k].y;
      const double d2 = dx * dx + dy * dy;
      // Same selection rule as _mm256_min_pd(best, d2): keep d2 unless best < d2.
      best = (k == 0 || !(best < d2)) ? d2 : best;
    }
    out[i] = best;
  }
}

}  // namespace lamimo::simd::scalar
