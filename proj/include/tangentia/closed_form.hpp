#pragma once

#include <array>
#include <vector>

#include "tangentia/core.hpp"
#include "tangentia/solver.hpp"

namespace tangentia {

// Regular tetrahedron in the first three coordinates plus spheres at
// +-a e_j for j = 4..n, all of radius r.
struct Thm4Params {
  int n = 4;
  double a = 2.0;
  double r = 1.0;

  // a^2 (n-1) / (a^2 + n - 3)
  double gamma() const;
  // gamma + (3 - gamma)^2 / 4
  double delta() const;
  // Throws InvalidArgument unless n >= 4, a > 0, r > 0.
  void validate() const;
};

// Factors whose vanishing makes the family degenerate:
// r^2 - 3, 3 - gamma, a^2 - 2, r^2 - gamma, (3 - gamma)^2 + 4 gamma - 4 r^2.
std::array<double, 5> discriminant_factors(const Thm4Params& p);

inline constexpr double kDiscriminantTol = 1e-10;

// True when every factor is at least kDiscriminantTol in magnitude.
bool discriminant_ok(const Thm4Params& p);

// a^2 > 2, gamma < 3 and gamma < r^2 < delta.
bool reality_region(const Thm4Params& p);

SphereArrangement thm4_arrangement(const Thm4Params& p);

// All 3 * 2^(n-1) common tangents in closed form. Throws
// DiscriminantVanishes near a vanishing factor.
SolutionSet thm4_tangents(const Thm4Params& p, double reality_tol = kDefaultRealityTol);

struct RegionClassification {
  double a = 0.0;
  double r = 0.0;
  bool on_discriminant = false;
  bool all_real = false;
  // Both zero on the discriminant.
  int count_real = 0;
  int count_complex = 0;
};

struct GridAxis {
  double min = 0.0;
  double max = 1.0;
  int steps = 2;

  // Inclusive of both ends; a single step gives min.
  std::vector<double> values() const;
};

// Row-major over a, then r.
std::vector<RegionClassification> region_sample(int n, const GridAxis& a_grid,
                                                const GridAxis& r_grid);

// Centers +-e_j for j = 2..n (a = 1), or a e_2, -e_2 and +-e_j for j >= 3.
struct CrosspolytopeParams {
  int n = 3;
  double r = 1.0;
  double a = 1.0;

  // Throws InvalidArgument unless n >= 3, r > 0, a != -1.
  void validate() const;
};

SphereArrangement crosspolytope_arrangement(const CrosspolytopeParams& p);

// The 2^n tangents for the exact crosspolytope (a is ignored). Throws
// DegenerateRadius when r^2 = 1 or a radicand vanishes.
SolutionSet crosspolytope_tangents(int n, double r, double reality_tol = kDefaultRealityTol);

// Coefficients (c3, c2, c1, c0) of the homogeneous cubic
// c3 A^3 + c2 A^2 G + c1 A G^2 + c0 G^3 in A = v_1^2 and G = v_3^2.
std::array<double, 4> perturbed_cubic(const CrosspolytopeParams& p);

// Discriminant of perturbed_cubic after scaling its largest coefficient to
// one; zero exactly at a repeated root.
double cubic_discriminant(const CrosspolytopeParams& p);

// 3 * 2^(n-1) tangents for a not in {-1, 1}. Throws DiscriminantVanishes or
// ZeroCoordinateRoot at non-generic (a, r).
SolutionSet perturbed_crosspolytope_tangents(const CrosspolytopeParams& p,
                                             double reality_tol = kDefaultRealityTol);

// Sign vectors in Gray-code order: entry k of the result flips one sign
// relative to entry k - 1. Each vector has `bits` entries of +-1.
std::vector<std::vector<int>> gray_code_signs(int bits);

}  // namespace tangentia
