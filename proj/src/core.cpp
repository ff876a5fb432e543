#include "tangentia/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tangentia/errors.hpp"

namespace tangentia {

Sphere::Sphere(RVector c, double r) : center(std::move(c)), radius(r) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw InvalidArgument("sphere radius must be positive, got " + std::to_string(radius));
  }
  if (!center.allFinite()) {
    throw InvalidArgument("sphere center has non-finite coordinates");
  }
}

SphereArrangement::SphereArrangement(int n, std::vector<Sphere> spheres)
    : n_(n), spheres_(std::move(spheres)) {
  if (n_ < 3) {
    throw InvalidArgument("ambient dimension must be >= 3, got " + std::to_string(n_));
  }
  if (spheres_.size() != expected_count(n_)) {
    throw InvalidArgument("expected 2n-2 = " + std::to_string(expected_count(n_)) +
                          " spheres, got " + std::to_string(spheres_.size()));
  }
  for (std::size_t i = 0; i < spheres_.size(); ++i) {
    if (spheres_[i].center.size() != n_) {
      throw DimensionMismatch("sphere " + std::to_string(i) + " has center of dimension " +
                              std::to_string(spheres_[i].center.size()) + ", expected " +
                              std::to_string(n_));
    }
  }
}

Complex dot(const CVector& x, const CVector& y) {
  if (x.size() != y.size()) {
    throw DimensionMismatch("dot: dimensions " + std::to_string(x.size()) + " and " +
                            std::to_string(y.size()));
  }
  return (x.array() * y.array()).sum();
}

Complex dot(const CVector& x, const RVector& y) {
  if (x.size() != y.size()) {
    throw DimensionMismatch("dot: dimensions " + std::to_string(x.size()) + " and " +
                            std::to_string(y.size()));
  }
  return (x.array() * y.array().cast<Complex>()).sum();
}

Complex tangency_residual(const Sphere& s, const Line& l) {
  const Complex v2 = dot(l.v, l.v);
  const Complex p2 = dot(l.p, l.p);
  const Complex pc = dot(l.p, s.center);
  const Complex vc = dot(l.v, s.center);
  const double c2 = s.center.squaredNorm();
  const double r2 = s.radius * s.radius;
  return v2 * p2 - 2.0 * v2 * pc + v2 * c2 - vc * vc - r2 * v2;
}

namespace {

bool is_real_vector(const CVector& x, double tol) {
  return x.imag().cwiseAbs().maxCoeff() <= tol * std::max(1.0, x.real().cwiseAbs().maxCoeff());
}

Eigen::Index max_modulus_index(const CVector& v) {
  Eigen::Index idx = 0;
  v.cwiseAbs().maxCoeff(&idx);
  return idx;
}

}  // namespace

double distance_point_line(const RVector& c, const Line& l) {
  if (l.v.size() == 0 || l.v.cwiseAbs().maxCoeff() == 0.0) {
    throw IsotropicDirection("distance_point_line: zero direction");
  }
  const Line nl = normalize_direction(l);
  if (!is_real_vector(nl.v, 1e-12) || !is_real_vector(nl.p, 1e-12)) {
    throw IsotropicDirection("distance_point_line: line is not real");
  }
  const RVector v = nl.v.real();
  const RVector p = nl.p.real();
  if (c.size() != v.size()) {
    throw DimensionMismatch("distance_point_line: dimension mismatch");
  }
  const RVector d = p - c;
  const double v2 = v.squaredNorm();
  const double proj = v.dot(d);
  const double dist2 = d.squaredNorm() - proj * proj / v2;
  return std::sqrt(std::max(0.0, dist2));
}

Line normalize_moment(const CVector& p, const CVector& v) {
  const Complex v2 = dot(v, v);
  const double scale = v.squaredNorm();
  if (scale == 0.0 || std::abs(v2) <= 1e-14 * scale) {
    throw IsotropicDirection("normalize_moment: v^2 vanishes");
  }
  const Complex pv = dot(p, v);
  return Line{p - (pv / v2) * v, v};
}

Line normalize_direction(const Line& l) {
  if (l.v.size() == 0) return l;
  const Complex pivot = l.v(max_modulus_index(l.v));
  if (pivot == Complex(0.0)) {
    throw IsotropicDirection("normalize_direction: zero direction");
  }
  return Line{l.p, l.v / pivot};
}

bool is_real_line(const Line& l, double tol) {
  const Line nl = normalize_direction(l);
  if (!is_real_vector(nl.v, tol)) return false;
  // With a real direction, a complex offset along v does not change the
  // line, so test the normalized moment point.
  const CVector vr = nl.v.real().cast<Complex>();
  const Line m = normalize_moment(nl.p, vr);
  return is_real_vector(m.p, tol);
}

Line conjugate_line(const Line& l) { return Line{l.p.conjugate(), l.v.conjugate()}; }

double max_tangency_residual(const SphereArrangement& arr, const Line& l) {
  const Line nl = normalize_direction(l);
  double worst = 0.0;
  for (const Sphere& s : arr.spheres()) {
    worst = std::max(worst, std::abs(tangency_residual(s, nl)));
  }
  return worst;
}

double projective_distance(const CVector& a, const CVector& b) {
  if (a.size() != b.size()) {
    throw DimensionMismatch("projective_distance: dimension mismatch");
  }
  const double na = a.squaredNorm();
  const double nb = b.squaredNorm();
  if (na == 0.0 || nb == 0.0) return 1.0;
  const double c2 = std::norm(a.dot(b)) / (na * nb);
  return std::sqrt(std::max(0.0, 1.0 - c2));
}

double line_distance(const Line& a, const Line& b) {
  const double dv = projective_distance(a.v, b.v);
  const Line ma = normalize_moment(a.p, a.v);
  const Line mb = normalize_moment(b.p, b.v);
  const double scale = 1.0 + std::max(ma.p.norm(), mb.p.norm());
  return std::max(dv, (ma.p - mb.p).norm() / scale);
}

bool is_isotropic(const CVector& v, double tol) {
  return std::abs(dot(v, v)) < tol * v.squaredNorm();
}

}  // namespace tangentia
