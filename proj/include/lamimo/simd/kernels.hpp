#pragma once

// Distance kernels for the coupling computation. Each entry point exists as a
// scalar reference and, on x86-64, an AVX2 variant; the public functions pick
// one at runtime. Both variants perform the same IEEE operations in the same
// order (no FMA), so their outputs are bit-identical.

#include <span>
#include <string_view>

namespace lamimo {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

namespace simd {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa) noexcept;

/// Best instruction set supported by both the build and the running CPU.
Isa detected_isa() noexcept;

/// Instruction set the dispatching entry points currently use. Defaults to
/// detected_isa(); LAMIMO_SIMD=scalar in the environment forces the reference.
Isa active_isa() noexcept;

/// Overrides dispatch (tests, benchmarks). Requests above detected_isa() are
/// clamped. Returns the previous setting.
Isa force_isa(Isa isa) noexcept;

/// out[i] = min over sources s of (xs[i]-s.x)^2 + (ys[i]-s.y)^2.
/// xs, ys and out must have equal length; sources must be non-empty.
void min_sq_distance(std::span<const double> xs, std::span<const double> ys,
                     std::span<const Vec2> sources, std::span<double> out);

namespace scalar {
void min_sq_distance(std::span<const double> xs, std::span<const double> ys,
                     std::span<const Vec2> sources, std::span<double> out);
}

namespace avx2 {
// Only callable when detected_isa() == Isa::avx2.
void min_sq_distance(std::span<const double> xs, std::span<const double> ys,
                     std::span<const Vec2> sources, std::span<double> out);
}

}  // namespace simd
}  // namespace lamimo
