#pragma once

// Batched inner loops with a portable scalar reference and an AVX2 variant.
// The variant is chosen at runtime from the CPU feature flags; setting
// TANGENTIA_KERNEL=scalar forces the reference path.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "tangentia/core.hpp"
#include "tangentia/poly.hpp"

namespace tangentia::kernels {

enum class Backend { scalar, avx2 };

bool avx2_available();
Backend active_backend();
std::string_view backend_name(Backend b);

// Structure-of-arrays lines: coordinate d of line j lives at d * count + j.
struct LineBatch {
  std::size_t dim = 0;
  std::size_t count = 0;
  std::vector<double> p_re, p_im, v_re, v_im;

  static LineBatch from_lines(const std::vector<Line>& lines);
};

// out[j] = max_i |tangency_residual(sphere_i, line_j)|. Lines are used as
// given; normalize directions first for comparable magnitudes.
void max_tangency_residuals(const SphereArrangement& arr, const LineBatch& lines,
                            std::span<double> out, Backend backend = active_backend());

// Dense exponent table for batched evaluation.
struct PackedSystem {
  std::size_t nvars = 0;
  std::vector<std::size_t> poly_offsets;  // size() + 1 entries into the term arrays
  std::vector<double> coeff_re, coeff_im;
  std::vector<std::uint8_t> exponents;    // nvars per term

  static PackedSystem from(const PolySystem& s);
  std::size_t size() const { return poly_offsets.empty() ? 0 : poly_offsets.size() - 1; }
};

// Structure-of-arrays points: variable i of point j lives at i * count + j.
struct PointBatch {
  std::size_t nvars = 0;
  std::size_t count = 0;
  std::vector<double> re, im;

  static PointBatch from_points(const std::vector<CVector>& points);
};

// Output value of polynomial k at point j goes to k * count + j.
void evaluate_batch(const PackedSystem& sys, const PointBatch& pts, std::span<double> out_re,
                    std::span<double> out_im, Backend backend = active_backend());

namespace scalar {
void max_tangency_residuals(const SphereArrangement& arr, const LineBatch& lines,
                            std::span<double> out);
void evaluate_batch(const PackedSystem& sys, const PointBatch& pts, std::span<double> out_re,
                    std::span<double> out_im);
}  // namespace scalar

namespace avx2 {
void max_tangency_residuals(const SphereArrangement& arr, const LineBatch& lines,
                            std::span<double> out);
void evaluate_batch(const PackedSystem& sys, const PointBatch& pts, std::span<double> out_re,
                    std::span<double> out_im);
}  // namespace avx2

}  // namespace tangentia::kernels
