#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace tangentia {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;

inline constexpr double kDefaultResidualTol = 1e-8;
inline constexpr double kDefaultRealityTol = 1e-7;

struct Sphere {
  RVector center;
  double radius;

  // Throws InvalidArgument unless radius > 0 and the center is finite.
  Sphere(RVector c, double r);
};

// 2n-2 spheres in R^n, n >= 3.
class SphereArrangement {
 public:
  SphereArrangement(int n, std::vector<Sphere> spheres);

  int dimension() const { return n_; }
  std::size_t size() const { return spheres_.size(); }
  const std::vector<Sphere>& spheres() const { return spheres_; }
  const Sphere& operator[](std::size_t i) const { return spheres_[i]; }

  static std::size_t expected_count(int n) { return 2 * static_cast<std::size_t>(n) - 2; }

 private:
  int n_;
  std::vector<Sphere> spheres_;
};

// A line {p + t v}. p is the moment point (p . v = 0 once normalized);
// v is any representative of the projective direction.
struct Line {
  CVector p;
  CVector v;
};

struct SolutionRecord {
  Line line;
  double residual = 0.0;
  bool is_real = false;
  int multiplicity = 1;
  bool v_isotropic = false;
};

// Euclidean bilinear form sum x_i y_i, no conjugation.
Complex dot(const CVector& x, const CVector& y);
Complex dot(const CVector& x, const RVector& y);

// v^2 p^2 - 2 v^2 p.c + v^2 c^2 - (v.c)^2 - r^2 v^2. Vanishes iff the line
// is tangent to the sphere, provided v^2 != 0.
Complex tangency_residual(const Sphere& s, const Line& l);

// Euclidean distance from c to a real line. Throws IsotropicDirection for
// non-real or null directions.
double distance_point_line(const RVector& c, const Line& l);

// Projects p onto the hyperplane orthogonal to v. Throws IsotropicDirection
// when v^2 vanishes.
Line normalize_moment(const CVector& p, const CVector& v);

// Rescales v so its largest-modulus coordinate equals 1. p is a point and is
// left unchanged.
Line normalize_direction(const Line& l);

bool is_real_line(const Line& l, double tol = kDefaultRealityTol);

Line conjugate_line(const Line& l);

// max_i |tangency_residual(s_i, l)| with v normalized to unit max-modulus
// coordinate.
double max_tangency_residual(const SphereArrangement& arr, const Line& l);

// Distance between directions as points of P^{n-1} (sine of the
// Fubini-Study angle).
double projective_distance(const CVector& a, const CVector& b);

// Distance between two lines: max of the projective distance of the
// directions and the relative distance of the normalized moment points.
double line_distance(const Line& a, const Line& b);

bool is_isotropic(const CVector& v, double tol = 1e-10);

}  // namespace tangentia
