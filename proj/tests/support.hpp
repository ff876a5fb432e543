#pragma once

// Fixtures and independent oracles shared by the test binaries. Nothing here
// calls into the code under test for the quantity being checked.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "tangentia/core.hpp"
#include "tangentia/poly.hpp"
#include "tangentia/solver.hpp"

namespace testing_support {

using tangentia::CMatrix;
using tangentia::Complex;
using tangentia::CVector;
using tangentia::Line;
using tangentia::RMatrix;
using tangentia::RVector;
using tangentia::Sphere;
using tangentia::SphereArrangement;

inline RVector rvec(std::initializer_list<double> xs) {
  RVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

inline CVector cvec(std::initializer_list<Complex> xs) {
  CVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (Complex x : xs) v(i++) = x;
  return v;
}

inline CVector random_cvector(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> g(0.0, 1.0);
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double re = g(rng);
    const double im = g(rng);
    v(i) = Complex(re, im);
  }
  return v;
}

inline RVector random_rvector(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> g(0.0, 1.0);
  RVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = g(rng);
  return v;
}

// Gaussian centers, radii uniform in [0.5, 1.5].
inline SphereArrangement random_arrangement(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> radius(0.5, 1.5);
  std::vector<Sphere> spheres;
  for (std::size_t i = 0; i < SphereArrangement::expected_count(n); ++i) {
    RVector c = random_rvector(rng, n);
    spheres.emplace_back(c, radius(rng));
  }
  return SphereArrangement(n, std::move(spheres));
}

// Regular tetrahedron with vertices (+-1, +-1, +-1), even number of minus signs.
inline SphereArrangement tetrahedron(double r) {
  std::vector<Sphere> s;
  s.emplace_back(rvec({1, 1, 1}), r);
  s.emplace_back(rvec({1, -1, -1}), r);
  s.emplace_back(rvec({-1, 1, -1}), r);
  s.emplace_back(rvec({-1, -1, 1}), r);
  return SphereArrangement(3, std::move(s));
}

// Random orthogonal matrix from the QR of a Gaussian matrix.
inline RMatrix random_rotation(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  RMatrix a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = g(rng);
  }
  Eigen::HouseholderQR<RMatrix> qr(a);
  return qr.householderQ();
}

// x -> s (R x + t) applied to centers, radii scaled by s.
inline SphereArrangement transformed(const SphereArrangement& arr, const RMatrix& rot,
                                     const RVector& shift, double scale) {
  std::vector<Sphere> out;
  for (const auto& s : arr.spheres()) {
    RVector c = scale * (rot * s.center + shift);
    out.emplace_back(c, scale * s.radius);
  }
  return SphereArrangement(arr.dimension(), std::move(out));
}

// Tangency from the definition, written out independently of the library:
// the line p + t v meets |x - c|^2 = r^2 in a double root iff the quadratic
// v^2 t^2 + 2 v.(p-c) t + (p-c)^2 - r^2 has vanishing discriminant. Returned
// relative to the size of its terms.
inline double tangency_oracle(const Sphere& s, const Line& l) {
  const CVector d = l.p - s.center.cast<Complex>();
  const Complex a = (l.v.array() * l.v.array()).sum();
  const Complex b = (l.v.array() * d.array()).sum();
  const Complex c = (d.array() * d.array()).sum() - s.radius * s.radius;
  const Complex disc = b * b - a * c;
  const double scale = std::abs(b * b) + std::abs(a * c) + std::abs(a) * s.radius * s.radius;
  return std::abs(disc) / std::max(scale, 1e-300);
}

inline double max_tangency_oracle(const SphereArrangement& arr, const Line& l) {
  double worst = 0.0;
  for (const auto& s : arr.spheres()) worst = std::max(worst, tangency_oracle(s, l));
  return worst;
}

// Euclidean distance from c to a real line, via the closest point.
inline double distance_oracle(const RVector& c, const RVector& p, const RVector& v) {
  const RVector u = v.normalized();
  const RVector d = c - p;
  return (d - d.dot(u) * u).norm();
}

// Length of the part of a orthogonal to b, relative to |a|. Avoids the
// sqrt(1 - cos^2) form, which bottoms out near 1e-8.
inline double sine_angle(const CVector& a, const CVector& b) {
  const CVector rest = a - (b.dot(a) / b.squaredNorm()) * b;
  return rest.norm() / a.norm();
}

// Lines compared by direction angle and by the foot of the perpendicular
// from the origin, both computed here.
inline double line_gap(const Line& a, const Line& b) {
  auto foot = [](const Line& l) {
    const Complex vv = (l.v.array() * l.v.array()).sum();
    const Complex pv = (l.p.array() * l.v.array()).sum();
    return CVector(l.p - (pv / vv) * l.v);
  };
  const CVector fa = foot(a);
  const CVector fb = foot(b);
  return std::max(sine_angle(a.v, b.v), (fa - fb).norm() / (1.0 + std::max(fa.norm(), fb.norm())));
}

// Largest distance from a line of `want` to its nearest line in `have`.
inline double worst_match(const std::vector<Line>& want, const std::vector<Line>& have) {
  double worst = 0.0;
  for (const auto& w : want) {
    double best = INFINITY;
    for (const auto& h : have) best = std::min(best, line_gap(w, h));
    worst = std::max(worst, best);
  }
  return worst;
}

inline std::vector<Line> finite_lines(const tangentia::SolutionSet& s) {
  std::vector<Line> out;
  for (const auto& r : s.records) {
    if (!r.v_isotropic) out.push_back(r.line);
  }
  return out;
}

// Evaluation straight from the term list in a caller-chosen order.
inline Complex evaluate_terms(const tangentia::Polynomial& f, const CVector& x,
                              std::mt19937_64* shuffle = nullptr) {
  std::vector<std::pair<tangentia::Monomial, Complex>> terms(f.terms().begin(), f.terms().end());
  if (shuffle) std::shuffle(terms.begin(), terms.end(), *shuffle);
  Complex sum = 0.0;
  for (const auto& [m, c] : terms) {
    Complex t = c;
    for (std::size_t i = 0; i < m.nvars(); ++i) {
      for (int k = 0; k < m[i]; ++k) t *= x(static_cast<Eigen::Index>(i));
    }
    sum += t;
  }
  return sum;
}

// Random polynomial with `terms` monomials of degree <= max_deg.
inline tangentia::Polynomial random_polynomial(std::mt19937_64& rng, std::size_t nvars, int max_deg,
                                               int terms) {
  std::uniform_int_distribution<int> e(0, max_deg);
  std::normal_distribution<double> g(0.0, 1.0);
  tangentia::Polynomial f(nvars);
  for (int t = 0; t < terms; ++t) {
    tangentia::Monomial m(nvars);
    int budget = max_deg;
    for (std::size_t i = 0; i < nvars && budget > 0; ++i) {
      const int k = std::min(budget, e(rng));
      m[i] = static_cast<std::uint16_t>(k);
      budget -= k;
    }
    const double re = g(rng);
    const double im = g(rng);
    f.add_term(m, Complex(re, im));
  }
  return f;
}

}  // namespace testing_support
