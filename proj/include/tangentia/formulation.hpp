#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "tangentia/core.hpp"
#include "tangentia/poly.hpp"

namespace tangentia {

// The tangency conditions for 2n-2 spheres reduced to n-1 homogeneous
// equations in the direction v: one cubic (p.v = 0), one quartic (p^2 = r^2)
// and n-3 quadrics (the spheres not used to solve for p).
struct ReducedSystem {
  PolySystem system;
  // Original sphere indices whose translated centers form the basis M.
  std::vector<std::size_t> basis_indices;
  // Original indices of the spheres that contribute the quadrics.
  std::vector<std::size_t> extra_indices;
  // Index of the sphere moved to the origin (always the last one).
  std::size_t origin_index = 0;
  RVector origin_shift;
  RMatrix basis_inverse;
  // Translated centers and radii of the basis spheres, in basis order.
  std::vector<RVector> basis_centers;
  std::vector<double> basis_radii;
  double base_radius = 0.0;
  int n = 0;
  // The untranslated input, used for residual checks.
  std::vector<Sphere> spheres;
};

// Throws AffinelyDependentCenters when the centers do not affinely span R^n.
ReducedSystem build_reduced_system(const SphereArrangement& arr);

// Closed form for the moment point given a direction solving the reduced
// system, returned in the original coordinates and moment-normalized.
// Throws IsotropicDirection when v^2 vanishes.
CVector back_substitute_p(const CVector& v, const ReducedSystem& red);

// Centers spanning only an affine hyperplane. The moment point is
// determined up to its component s along the normal, which is kept as the
// unknown sigma = 2 v^2 s. Variables are v_1..v_n followed by sigma; the
// equations are weighted homogeneous (weight 2 for sigma) of weighted
// degrees 3, 4 and 2 (n-2 times).
struct DependentSystem {
  std::vector<Polynomial> equations;
  // 2 v^2 times the part of p in the span of the translated centers.
  std::vector<Polynomial> q_span;
  RVector normal;
  RVector origin_shift;
  int n = 0;
  std::vector<Sphere> spheres;
};

// Throws InvalidArgument for spanning centers and AffinelyDependentCenters
// when the centers span less than a hyperplane.
DependentSystem build_dependent_system(const SphereArrangement& arr);

struct CubicCoefficients {
  int n = 0;
  RMatrix alpha;              // alpha(i, j), symmetric, zero diagonal
  std::vector<double> beta;   // beta(i, j, k) for i < j < k, dense n^3 storage

  double beta_at(int i, int j, int k) const { return beta[(i * n + j) * n + k]; }
};

// Gram-determinant coefficients of the p.v = 0 cubic in the basis c_1..c_n
// for equal radii.
CubicCoefficients cubic_coefficients(const std::vector<RVector>& centers);

// sum_{i != j} alpha_ij t_i^2 t_j + 2 sum_{i<j<k} beta_ijk t_i t_j t_k
Polynomial basis_cubic(const CubicCoefficients& coeffs);

// The cubic for a regular simplex with a vertex at the origin, up to the
// common factor 3e^4/4.
Polynomial simplex_cubic(int n);

// Vectors c'_i with c'_i . c_j = delta_ij. Throws SingularBasis.
std::vector<RVector> dual_basis(const std::vector<RVector>& basis);

// Symmetric (n+1)x(n+1) matrix acting on (x_0, x_1, ..., x_n).
struct ProjectiveQuadric {
  CMatrix q;

  explicit ProjectiveQuadric(CMatrix m);
  int dimension() const { return static_cast<int>(q.rows()) - 1; }
  Complex evaluate(const CVector& x, const CVector& y) const { return x.transpose() * q * y; }
  // Same quadric scaled to unit Frobenius norm.
  ProjectiveQuadric normalized() const;
};

// (x - c x_0)^2 - r^2 x_0^2 as a symmetric matrix (not rescaled).
ProjectiveQuadric homogenize_sphere(const Sphere& s);
// diag(0, 1, ..., 1): the restriction of every sphere to x_0 = 0.
ProjectiveQuadric quadric_at_infinity(int n);

// Index pairs (i, j), i < j, in lexicographic order; position k in this
// list is Plucker variable k.
std::vector<std::pair<int, int>> plucker_pairs(int n);
// p_ij = x_i y_j - x_j y_i for the line through x and y in P^n.
CVector plucker_coordinates(const CVector& x, const CVector& y);
// Quadratic form in the C(n+1, 2) Plucker variables given by the second
// compound of Q. On the line through x and y it equals
// (x'Qx)(y'Qy) - (x'Qy)^2.
Polynomial plucker_tangency_form(const ProjectiveQuadric& q);
// Quadratic Plucker relations cutting out G(2, n+1), one per 4-subset.
std::vector<Polynomial> plucker_relations(int n);

std::uint64_t bezout_bound_spheres(int n);
std::uint64_t grassmannian_degree(int n);
std::uint64_t bezout_bound_quadrics(int n);

}  // namespace tangentia
