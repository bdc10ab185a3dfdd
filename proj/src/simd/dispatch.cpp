#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "lamimo/simd/kernels.hpp"

namespace lamimo::simd {

namespace {

Isa probe() noexcept {
#if defined(LAMIMO_WITH_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2")) return Isa::avx2;
#endif
  return Isa::scalar;
}

Isa initial_active() noexcept {
  const char* env = std::getenv("LAMIMO_SIMD");
  if (env != nullptr && std::strcmp(env, "scalar") == 0) return Isa::scalar;
  return detected_isa();
}

std::atomic<Isa>& active_slot() noexcept {
  static std::atomic<Isa> slot{initial_active()};
  return slot;
}

}  // namespace

#if !defined(LAMIMO_WITH_AVX2)
namespace avx2 {
void min_sq_distance(std::span<const double>, std::span<const double>, std::span<const Vec2>,
                     std::span<double>) {
  throw std::logic_error("AVX2 kernels not built");
}
}  // namespace avx2
#endif

std::string_view isa_name(Isa isa) noexcept {
  return isa == Isa::avx2 ? "avx2" : "scalar";
}

Isa detected_isa() noexcept {
  static const Isa isa = probe();
  return isa;
}

Isa active_isa() noexcept { return active_slot().load(std::memory_order_relaxed); }

Isa force_isa(Isa isa) noexcept {
  if (isa == Isa::avx2 && detected_isa() != Isa::avx2) isa = Isa::scalar;
  return active_slot().exchange(isa);
}

void min_sq_distance(std::span<const double> xs, std::span<const double> ys,
                     std::span<const Vec2> sources, std::span<double> out) {
  if (xs.size() != ys.size() || xs.size() != out.size()) {
    throw std::invalid_argument("min_sq_distance: length mismatch");
  }
  if (sources.empty()) throw std::invalid_argument("min_sq_distance: no sources");
  if (active_isa() == Isa::avx2) {
    avx2::min_sq_distance(xs, ys, sources, out);
  } else {
    scalar::min_sq_distance(xs, ys, sources, out);
  }
}

}  // namespace lamimo::simd
