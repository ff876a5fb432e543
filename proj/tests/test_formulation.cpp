#include <doctest.h>

#include <algorithm>
#include <random>

#include "support.hpp"
#include "tangentia/closed_form.hpp"
#include "tangentia/errors.hpp"
#include "tangentia/formulation.hpp"

using namespace tangentia;
using namespace testing_support;

namespace {

std::vector<int> sorted_degrees(const PolySystem& s) {
  std::vector<int> d = s.degrees();
  std::sort(d.begin(), d.end());
  return d;
}

// 2n-2 spheres all tangent to one real line: random centers, radius equal to
// the distance from the line.
struct PlantedLine {
  SphereArrangement arr;
  RVector p;
  RVector v;
};

PlantedLine planted(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const RVector v = random_rvector(rng, n);
  RVector p = random_rvector(rng, n);
  p -= (p.dot(v) / v.squaredNorm()) * v;
  std::vector<Sphere> spheres;
  for (std::size_t i = 0; i < SphereArrangement::expected_count(n); ++i) {
    const RVector c = 2.0 * random_rvector(rng, n);
    spheres.emplace_back(c, distance_oracle(c, p, v));
  }
  return {SphereArrangement(n, std::move(spheres)), p, v};
}

// Vertices of a regular simplex with edge e and one vertex at the origin,
// from the Cholesky factor of the Gram matrix e^2 (I + 11^T) / 2.
std::vector<RVector> simplex_vertices(int n, double e) {
  const RMatrix gram = 0.5 * e * e * (RMatrix::Identity(n, n) + RMatrix::Ones(n, n));
  const RMatrix u = gram.llt().matrixU();
  std::vector<RVector> out;
  for (int i = 0; i < n; ++i) out.push_back(u.col(i));
  return out;
}

}  // namespace

TEST_CASE("reduced system shape") {
  const ReducedSystem t = build_reduced_system(tetrahedron(1.45));
  CHECK(t.system.size() == 2);
  CHECK(t.system.nvars() == 3);
  CHECK(sorted_degrees(t.system) == std::vector<int>{3, 4});
  for (int n = 4; n <= 7; ++n) {
    const ReducedSystem r = build_reduced_system(random_arrangement(n, 100 + n));
    CHECK(r.system.size() == static_cast<std::size_t>(n - 1));
    std::vector<int> want(static_cast<std::size_t>(n - 3), 2);
    want.push_back(3);
    want.push_back(4);
    CHECK(sorted_degrees(r.system) == want);
    for (const auto& p : r.system.polys()) CHECK(p.is_homogeneous());
    CHECK(r.basis_indices.size() == static_cast<std::size_t>(n));
    CHECK(r.extra_indices.size() == static_cast<std::size_t>(n - 3));
  }
}

TEST_CASE("dependent centers are rejected") {
  CHECK_THROWS_AS(build_reduced_system(crosspolytope_arrangement({4, 0.95, 1.0})),
                  AffinelyDependentCenters);
  std::vector<Sphere> collinear;
  for (int k = 0; k < 4; ++k) collinear.emplace_back(rvec({double(k), 2.0 * k, -1.0 * k}), 1.0);
  CHECK_THROWS_AS(build_reduced_system(SphereArrangement(3, collinear)), AffinelyDependentCenters);
}

TEST_CASE("a planted tangent direction solves the reduced system") {
  for (int n = 3; n <= 6; ++n) {
    const PlantedLine pl = planted(n, 200 + n);
    const ReducedSystem red = build_reduced_system(pl.arr);
    const CVector v = pl.v.cast<Complex>();
    const CVector f = evaluate(red.system, v);
    for (Eigen::Index i = 0; i < f.size(); ++i) {
      const double scale = red.system[static_cast<std::size_t>(i)].evaluate_abs(v);
      CHECK(std::abs(f(i)) < 1e-10 * scale);
    }
    // The moment point comes back, and scaling v does not move it.
    const CVector p = back_substitute_p(v, red);
    CHECK((p - pl.p.cast<Complex>()).norm() < 1e-9 * (1 + pl.p.norm()));
    const CVector p2 = back_substitute_p(Complex(-2.5, 0.7) * v, red);
    CHECK((p2 - p).norm() < 1e-9 * (1 + p.norm()));
    CHECK(max_tangency_oracle(pl.arr, Line{p, v}) < 1e-10);
  }
}

TEST_CASE("back substitution is covariant under rotations") {
  std::mt19937_64 rng(31);
  const PlantedLine pl = planted(4, 301);
  const RMatrix rot = random_rotation(rng, 4);
  const RVector shift = random_rvector(rng, 4);
  const SphereArrangement moved = transformed(pl.arr, rot, shift, 1.0);
  const ReducedSystem red = build_reduced_system(moved);
  const RVector v = rot * pl.v;
  const CVector p = back_substitute_p(v.cast<Complex>(), red);
  // Moment point of the moved line, normalized in the original frame.
  RVector want = rot * pl.p + shift;
  want -= (want.dot(v) / v.squaredNorm()) * v;
  CHECK((p - want.cast<Complex>()).norm() < 1e-9 * (1 + want.norm()));
  const Complex i(0, 1);
  CHECK_THROWS_AS(back_substitute_p(cvec({1, i, 0, 0}), red), IsotropicDirection);
}

TEST_CASE("cubic coefficients for special bases") {
  std::vector<RVector> ortho;
  for (int i = 0; i < 4; ++i) ortho.push_back(RVector::Unit(4, i));
  const CubicCoefficients o = cubic_coefficients(ortho);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i != j) CHECK(o.alpha(i, j) == doctest::Approx(1.0));
    }
  }
  CHECK(o.beta_at(0, 1, 2) == doctest::Approx(0.0));
  CHECK(o.beta_at(1, 2, 3) == doctest::Approx(0.0));

  // Gram determinants of edge-e vectors scale as e^4.
  for (double e : {1.0, 2.0}) {
    const CubicCoefficients s = cubic_coefficients(simplex_vertices(4, e));
    const double want = 0.75 * e * e * e * e;
    CHECK(s.alpha(0, 1) == doctest::Approx(want));
    CHECK(s.alpha(3, 2) == doctest::Approx(want));
    CHECK(s.beta_at(0, 1, 2) == doctest::Approx(want));
    CHECK(s.beta_at(1, 2, 3) == doctest::Approx(want));
  }
}

TEST_CASE("regular simplex gives the simplex cubic") {
  for (int n = 3; n <= 5; ++n) {
    const Polynomial c = basis_cubic(cubic_coefficients(simplex_vertices(n, 1.7)));
    const Polynomial s = simplex_cubic(n);
    const double k = 0.75 * std::pow(1.7, 4);
    const Polynomial diff = c - s * Complex(k);
    for (const auto& [m, coeff] : diff.terms()) CHECK(std::abs(coeff) < 1e-12 * k);
  }
}

TEST_CASE("simplex cubic values") {
  const Polynomial c3 = simplex_cubic(3);
  CHECK(std::abs(c3.evaluate(cvec({1, 1, -1}))) < 1e-15);
  CHECK(simplex_cubic(4).evaluate(cvec({1, 1, 1, 1})) == Complex(20, 0));
  // Coefficientwise factorization for n = 3.
  const Polynomial t1 = Polynomial::variable(3, 0);
  const Polynomial t2 = Polynomial::variable(3, 1);
  const Polynomial t3 = Polynomial::variable(3, 2);
  const Polynomial prod = (t1 + t2) * (t1 + t3) * (t2 + t3);
  CHECK((c3 - prod).is_zero());
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 20; ++trial) {
    const CVector t = random_cvector(rng, 3);
    const Complex f = (t(0) + t(1)) * (t(0) + t(2)) * (t(1) + t(2));
    CHECK(std::abs(c3.evaluate(t) - f) < 1e-12 * (1 + std::abs(f)));
  }
  CHECK_THROWS_AS(simplex_cubic(2), InvalidArgument);
}

TEST_CASE("the p.v cubic is the basis cubic in dual coordinates") {
  // Equal radii, last sphere at the origin: the reduced cubic and the
  // alpha/beta cubic in t_i = c'_i . v agree up to a constant factor.
  std::mt19937_64 rng(33);
  std::vector<RVector> basis;
  for (int i = 0; i < 3; ++i) basis.push_back(random_rvector(rng, 3));
  std::vector<Sphere> spheres;
  for (const auto& c : basis) spheres.emplace_back(c, 0.8);
  spheres.emplace_back(RVector::Zero(3), 0.8);
  const ReducedSystem red = build_reduced_system(SphereArrangement(3, spheres));
  const Polynomial* cubic = nullptr;
  for (const auto& p : red.system.polys()) {
    if (p.total_degree() == 3) cubic = &p;
  }
  REQUIRE(cubic != nullptr);
  const Polynomial basis_form = basis_cubic(cubic_coefficients(basis));
  const auto dual = dual_basis(basis);
  Complex ratio = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const CVector v = random_cvector(rng, 3);
    CVector t(3);
    for (int i = 0; i < 3; ++i) t(i) = dual[static_cast<std::size_t>(i)].cast<Complex>().dot(v);
    // .dot conjugates the first argument; the dual vectors are real.
    const Complex r = cubic->evaluate(v) / basis_form.evaluate(t);
    if (trial == 0) ratio = r;
    CHECK(std::abs(r - ratio) < 1e-9 * std::abs(ratio));
  }
  CHECK(std::abs(ratio) > 1e-12);
}

TEST_CASE("dual basis") {
  std::vector<RVector> std_basis;
  for (int i = 0; i < 3; ++i) std_basis.push_back(RVector::Unit(3, i));
  const auto d = dual_basis(std_basis);
  for (int i = 0; i < 3; ++i) CHECK((d[static_cast<std::size_t>(i)] - RVector::Unit(3, i)).norm() < 1e-15);
  std::vector<RVector> twice;
  for (int i = 0; i < 3; ++i) twice.push_back(2.0 * RVector::Unit(3, i));
  const auto h = dual_basis(twice);
  for (int i = 0; i < 3; ++i) {
    CHECK((h[static_cast<std::size_t>(i)] - 0.5 * RVector::Unit(3, i)).norm() < 1e-15);
  }
  std::mt19937_64 rng(34);
  std::vector<RVector> rnd;
  for (int i = 0; i < 5; ++i) rnd.push_back(random_rvector(rng, 5));
  const auto rd = dual_basis(rnd);
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      CHECK(std::abs(rd[i].dot(rnd[j]) - (i == j ? 1.0 : 0.0)) < 1e-12);
    }
  }
  std::vector<RVector> dep{rvec({1, 0, 0}), rvec({0, 1, 0}), rvec({1, 1, 0})};
  CHECK_THROWS_AS(dual_basis(dep), SingularBasis);
}

TEST_CASE("homogenized spheres share the quadric at infinity") {
  const ProjectiveQuadric unit = homogenize_sphere(Sphere(RVector::Zero(3), 1.0));
  CMatrix want = CMatrix::Identity(4, 4);
  want(0, 0) = -1.0;
  CHECK((unit.q - want).norm() == 0.0);
  std::mt19937_64 rng(35);
  const ProjectiveQuadric inf = quadric_at_infinity(3);
  for (int trial = 0; trial < 3; ++trial) {
    const ProjectiveQuadric q = homogenize_sphere(Sphere(random_rvector(rng, 3), 0.5 + trial));
    CHECK((q.q.bottomRightCorner(3, 3) - inf.q.bottomRightCorner(3, 3)).norm() == 0.0);
    // Restricted to x_0 = 0 the form is x_1^2 + x_2^2 + x_3^2.
    CVector x = random_cvector(rng, 4);
    x(0) = 0.0;
    const Complex sum = (x.tail(3).array() * x.tail(3).array()).sum();
    CHECK(std::abs(q.evaluate(x, x) - sum) < 1e-12 * (1 + std::abs(sum)));
  }
  CHECK_THROWS_AS(ProjectiveQuadric(CMatrix::Random(3, 4)), DimensionMismatch);
  CMatrix asym = CMatrix::Zero(3, 3);
  asym(0, 1) = 1.0;
  CHECK_THROWS_AS(ProjectiveQuadric{asym}, InvalidArgument);
}

TEST_CASE("plucker tangency form") {
  const ProjectiveQuadric unit = homogenize_sphere(Sphere(RVector::Zero(3), 1.0));
  const Polynomial form = plucker_tangency_form(unit);
  // Through (1, 0, 0) along e_2: distance 1 from the center.
  const CVector x = cvec({1, 1, 0, 0});
  const CVector y = cvec({0, 0, 1, 0});
  CHECK(std::abs(form.evaluate(plucker_coordinates(x, y))) < 1e-15);
  // Through the center: (x'Qx)(y'Qy) - (x'Qy)^2 = (-1)(1) - 0.
  const CVector c0 = cvec({1, 0, 0, 0});
  const CVector c1 = cvec({0, 1, 0, 0});
  CHECK(form.evaluate(plucker_coordinates(c0, c1)) == Complex(-1, 0));

  std::mt19937_64 rng(36);
  for (int trial = 0; trial < 10; ++trial) {
    const ProjectiveQuadric q = homogenize_sphere(Sphere(random_rvector(rng, 4), 1.2));
    const Polynomial f = plucker_tangency_form(q);
    const CVector a = random_cvector(rng, 5);
    const CVector b = random_cvector(rng, 5);
    const Complex direct = q.evaluate(a, a) * q.evaluate(b, b) - q.evaluate(a, b) * q.evaluate(a, b);
    const Complex via = f.evaluate(plucker_coordinates(a, b));
    CHECK(std::abs(direct - via) < 1e-10 * (1 + std::abs(direct)));
    // Another spanning pair scales the value by the squared determinant.
    const Complex m00(0.3, 1.0), m01(-2.0, 0.1), m10(0.7, -0.4), m11(1.1, 0.0);
    const CVector a2 = m00 * a + m01 * b;
    const CVector b2 = m10 * a + m11 * b;
    const Complex det = m00 * m11 - m01 * m10;
    CHECK(std::abs(f.evaluate(plucker_coordinates(a2, b2)) - det * det * via) <
          1e-9 * (1 + std::abs(det * det * via)));
  }
}

TEST_CASE("plucker form on affine lines is the tangency residual") {
  std::mt19937_64 rng(37);
  const Sphere s(random_rvector(rng, 3), 0.9);
  const Polynomial f = plucker_tangency_form(homogenize_sphere(s));
  for (int trial = 0; trial < 10; ++trial) {
    const CVector v = random_cvector(rng, 3);
    const Line l = normalize_moment(random_cvector(rng, 3), v);
    CVector x(4), y(4);
    x << 1.0, l.p;
    y << 0.0, l.v;
    const Complex a = f.evaluate(plucker_coordinates(x, y));
    const Complex b = tangency_residual(s, l);
    CHECK(std::abs(a - b) < 1e-10 * (1 + std::abs(b)));
  }
}

TEST_CASE("plucker relations cut out decomposable vectors") {
  std::mt19937_64 rng(38);
  for (int n : {3, 4, 5}) {
    const auto rel = plucker_relations(n);
    const std::size_t n1 = static_cast<std::size_t>(n + 1);
    CHECK(rel.size() == n1 * (n1 - 1) * (n1 - 2) * (n1 - 3) / 24);
    const CVector p = plucker_coordinates(random_cvector(rng, n + 1), random_cvector(rng, n + 1));
    for (const auto& r : rel) CHECK(std::abs(r.evaluate(p)) < 1e-12 * (1 + p.squaredNorm()));
    // A generic vector is not a line.
    const CVector g = random_cvector(rng, p.size());
    double worst = 0.0;
    for (const auto& r : rel) worst = std::max(worst, std::abs(r.evaluate(g)));
    CHECK(worst > 1e-3);
  }
}

TEST_CASE("bound formulas") {
  const std::uint64_t spheres[] = {12, 24, 48, 96, 192};
  for (int n = 3; n <= 7; ++n) CHECK(bezout_bound_spheres(n) == spheres[n - 3]);
  CHECK(bezout_bound_quadrics(3) == 32);
  CHECK(bezout_bound_quadrics(4) == 320);
  CHECK(bezout_bound_quadrics(5) == 3584);
  CHECK(bezout_bound_quadrics(6) == 43008);
  CHECK(bezout_bound_quadrics(7) == 540672);
  CHECK(grassmannian_degree(3) == 2);
  CHECK(grassmannian_degree(6) == 42);
  CHECK(grassmannian_degree(7) == 132);
  for (int n = 3; n <= 16; ++n) {
    // Catalan numbers by the recurrence C_{k+1} = C_k 2(2k+1)/(k+2).
    unsigned __int128 catalan = 1;
    for (int k = 0; k < n - 1; ++k) catalan = catalan * 2 * (2 * k + 1) / (k + 2);
    CHECK(grassmannian_degree(n) == static_cast<std::uint64_t>(catalan));
    const unsigned __int128 q = (static_cast<unsigned __int128>(1) << (2 * n - 2)) * catalan;
    CHECK(bezout_bound_quadrics(n) == static_cast<std::uint64_t>(q));
    CHECK(static_cast<unsigned __int128>(bezout_bound_quadrics(n)) == q);
  }
  CHECK_THROWS_AS(bezout_bound_spheres(2), InvalidArgument);
  CHECK_THROWS_AS(bezout_bound_quadrics(17), InvalidArgument);
}

TEST_CASE("hyperplane formulation vanishes at a planted line") {
  // Centers in the hyperplane x_1 = 0.4 of R^4, all tangent to one line.
  std::mt19937_64 rng(39);
  const int n = 4;
  const RVector v = random_rvector(rng, n);
  RVector p = random_rvector(rng, n);
  p -= (p.dot(v) / v.squaredNorm()) * v;
  std::vector<Sphere> spheres;
  for (int i = 0; i < 2 * n - 2; ++i) {
    RVector c = random_rvector(rng, n);
    c(0) = 0.4;
    spheres.emplace_back(c, distance_oracle(c, p, v));
  }
  const SphereArrangement arr(n, spheres);
  const DependentSystem dep = build_dependent_system(arr);
  CHECK(dep.equations.size() == static_cast<std::size_t>(n));
  CHECK(std::abs(std::abs(dep.normal(0)) - 1.0) < 1e-12);
  // sigma = 2 v^2 s, s the normal part of the moment point in the frame
  // centered at the last sphere.
  RVector pt = p - dep.origin_shift;
  pt -= (pt.dot(v) / v.squaredNorm()) * v;
  const double sigma = 2.0 * v.squaredNorm() * pt.dot(dep.normal);
  CVector x(n + 1);
  x << v.cast<Complex>(), sigma;
  for (const auto& e : dep.equations) {
    CHECK(std::abs(e.evaluate(x)) < 1e-9 * (1 + e.evaluate_abs(x)));
  }
  CHECK_THROWS_AS(build_dependent_system(random_arrangement(4, 5)), InvalidArgument);
  std::vector<Sphere> flat;
  for (int i = 0; i < 6; ++i) flat.emplace_back(rvec({0.0, 0.0, double(i), 1.0 - i}), 1.0);
  CHECK_THROWS_AS(build_dependent_system(SphereArrangement(4, flat)), AffinelyDependentCenters);
}
