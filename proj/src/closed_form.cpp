#include "tangentia/closed_form.hpp"

#include <algorithm>
#include <cmath>

#include "tangentia/errors.hpp"
#include "tangentia/kernels.hpp"
#include "tangentia/poly.hpp"

namespace tangentia {

namespace {

constexpr double kRootTol = 1e-10;

const double kTetrahedron[4][3] = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};

Complex csqrt(double x) { return std::sqrt(Complex(x, 0.0)); }

SolutionSet finish(const SphereArrangement& arr, std::vector<Line> lines, double reality_tol) {
  SolutionSet out;
  out.config.reality_tol = reality_tol;
  out.patch = CVector();
  for (auto& l : lines) l = normalize_direction(l);
  std::vector<double> res(lines.size());
  if (!lines.empty()) {
    kernels::max_tangency_residuals(arr, kernels::LineBatch::from_lines(lines), res);
  }
  for (std::size_t i = 0; i < lines.size(); ++i) {
    SolutionRecord rec;
    rec.line = lines[i];
    rec.residual = res[i];
    rec.v_isotropic = is_isotropic(lines[i].v);
    rec.is_real = !rec.v_isotropic && is_real_line(lines[i], reality_tol);
    out.records.push_back(std::move(rec));
  }
  out.statuses.converged = out.records.size();
  return out;
}

// (x1, x2, x3) -> (x3, x1, x2) on the first three coordinates; the
// tetrahedron is invariant under it.
CVector rotate3(const CVector& x) {
  CVector y = x;
  y(0) = x(2);
  y(1) = x(0);
  y(2) = x(1);
  return y;
}

}  // namespace

std::vector<std::vector<int>> gray_code_signs(int bits) {
  if (bits < 0 || bits > 30) throw InvalidArgument("gray_code_signs: bits out of range");
  std::vector<std::vector<int>> out;
  const unsigned count = 1u << bits;
  for (unsigned i = 0; i < count; ++i) {
    const unsigned g = i ^ (i >> 1);
    std::vector<int> s(static_cast<std::size_t>(bits));
    for (int b = 0; b < bits; ++b) s[static_cast<std::size_t>(b)] = ((g >> b) & 1u) ? -1 : 1;
    out.push_back(std::move(s));
  }
  return out;
}

double Thm4Params::gamma() const { return a * a * (n - 1) / (a * a + n - 3); }

double Thm4Params::delta() const {
  const double g = gamma();
  return g + (3.0 - g) * (3.0 - g) / 4.0;
}

void Thm4Params::validate() const {
  if (n < 4) throw InvalidArgument("tetrahedron-plus-axes family needs n >= 4, got n = " + std::to_string(n));
  if (!(a > 0.0) || !std::isfinite(a)) throw InvalidArgument("tetrahedron-plus-axes family needs a > 0");
  if (!(r > 0.0) || !std::isfinite(r)) throw InvalidArgument("tetrahedron-plus-axes family needs r > 0");
}

std::array<double, 5> discriminant_factors(const Thm4Params& p) {
  const double g = p.gamma();
  const double r2 = p.r * p.r;
  return {r2 - 3.0, 3.0 - g, p.a * p.a - 2.0, r2 - g, (3.0 - g) * (3.0 - g) + 4.0 * g - 4.0 * r2};
}

bool discriminant_ok(const Thm4Params& p) {
  for (double f : discriminant_factors(p)) {
    if (std::abs(f) < kDiscriminantTol) return false;
  }
  return true;
}

bool reality_region(const Thm4Params& p) {
  const double g = p.gamma();
  const double r2 = p.r * p.r;
  return p.a * p.a > 2.0 && g < 3.0 && g < r2 && r2 < p.delta();
}

SphereArrangement thm4_arrangement(const Thm4Params& p) {
  p.validate();
  std::vector<Sphere> spheres;
  for (const auto& c : kTetrahedron) {
    RVector x = RVector::Zero(p.n);
    x.head(3) << c[0], c[1], c[2];
    spheres.emplace_back(x, p.r);
  }
  for (int j = 3; j < p.n; ++j) {
    for (double s : {1.0, -1.0}) {
      RVector x = RVector::Zero(p.n);
      x(j) = s * p.a;
      spheres.emplace_back(x, p.r);
    }
  }
  return SphereArrangement(p.n, std::move(spheres));
}

SolutionSet thm4_tangents(const Thm4Params& p, double reality_tol) {
  p.validate();
  if (!discriminant_ok(p)) {
    const auto f = discriminant_factors(p);
    std::string msg = "tetrahedron-plus-axes family is degenerate at n = " + std::to_string(p.n) +
                      ", a = " + std::to_string(p.a) + ", r = " + std::to_string(p.r) +
                      " (factors";
    for (double x : f) msg += " " + std::to_string(x);
    throw DiscriminantVanishes(msg + ")");
  }
  const int n = p.n;
  const double g = p.gamma();
  const double a2 = p.a * p.a;
  const double r2 = p.r * p.r;
  const auto tail_signs = gray_code_signs(n - 4);

  // Case v_1 = 0 with v_3 = 1; the other two cases are its rotations.
  std::vector<Line> base;
  for (double s1 : {1.0, -1.0}) {
    const Complex p1 = s1 * csqrt(r2 - g);
    const Complex disc = std::sqrt(Complex((3.0 - g) * (3.0 - g), 0.0) - 4.0 * p1 * p1);
    for (double s2 : {1.0, -1.0}) {
      const Complex v2 = (-(3.0 - g) + s2 * disc) / (2.0 * p1);
      const Complex v4 = std::sqrt((a2 - 2.0) / (3.0 - g) * (v2 * v2 + 1.0)) / std::sqrt(a2 + n - 3.0);
      for (double s4 : {1.0, -1.0}) {
        for (const auto& tail : tail_signs) {
          CVector v = CVector::Zero(n);
          CVector q = CVector::Zero(n);
          q(0) = p1;
          v(1) = v2;
          v(2) = 1.0;
          v(3) = s4 * v4;
          for (int j = 4; j < n; ++j) v(j) = static_cast<double>(tail[static_cast<std::size_t>(j - 4)]) * v(3);
          base.push_back(Line{q, v});
        }
      }
    }
  }
  std::vector<Line> lines;
  for (int turn = 0; turn < 3; ++turn) {
    for (const auto& l : base) {
      Line m = l;
      for (int k = 0; k < turn; ++k) m = Line{rotate3(m.p), rotate3(m.v)};
      lines.push_back(std::move(m));
    }
  }
  return finish(thm4_arrangement(p), std::move(lines), reality_tol);
}

std::vector<double> GridAxis::values() const {
  if (steps < 1) throw InvalidArgument("grid needs at least one step");
  std::vector<double> out;
  for (int i = 0; i < steps; ++i) {
    out.push_back(steps == 1 ? min : min + (max - min) * i / (steps - 1));
  }
  return out;
}

std::vector<RegionClassification> region_sample(int n, const GridAxis& a_grid,
                                                const GridAxis& r_grid) {
  if (n < 4) throw InvalidArgument("region sampling needs n >= 4");
  std::vector<RegionClassification> out;
  for (double a : a_grid.values()) {
    for (double r : r_grid.values()) {
      RegionClassification row;
      row.a = a;
      row.r = r;
      const Thm4Params p{n, a, r};
      if (!(a > 0.0) || !(r > 0.0) || !discriminant_ok(p)) {
        row.on_discriminant = true;
        out.push_back(row);
        continue;
      }
      const SolutionSet s = thm4_tangents(p);
      row.count_real = static_cast<int>(s.real_count());
      row.count_complex = static_cast<int>(s.total()) - row.count_real;
      row.all_real = row.count_complex == 0;
      out.push_back(row);
    }
  }
  return out;
}

void CrosspolytopeParams::validate() const {
  if (n < 3) throw InvalidArgument("crosspolytope needs n >= 3, got n = " + std::to_string(n));
  if (!(r > 0.0) || !std::isfinite(r)) throw InvalidArgument("crosspolytope needs r > 0");
  if (!std::isfinite(a) || a == -1.0) throw InvalidArgument("crosspolytope needs a != -1");
}

SphereArrangement crosspolytope_arrangement(const CrosspolytopeParams& p) {
  p.validate();
  std::vector<Sphere> spheres;
  RVector x = RVector::Zero(p.n);
  x(1) = p.a;
  spheres.emplace_back(x, p.r);
  x(1) = -1.0;
  spheres.emplace_back(x, p.r);
  for (int j = 2; j < p.n; ++j) {
    for (double s : {1.0, -1.0}) {
      RVector y = RVector::Zero(p.n);
      y(j) = s;
      spheres.emplace_back(y, p.r);
    }
  }
  return SphereArrangement(p.n, std::move(spheres));
}

SolutionSet crosspolytope_tangents(int n, double r, double reality_tol) {
  const CrosspolytopeParams params{n, r, 1.0};
  params.validate();
  const double r2 = r * r;
  if (std::abs(r2 - 1.0) < kRootTol) throw DegenerateRadius("crosspolytope: r^2 = 1");
  const double on_axis = r2 - 1.0 + 1.0 / (n - 1);
  const double through_origin = 1.0 / (1.0 - r2) + 1.0 - n;
  if (std::abs(on_axis) < kRootTol || std::abs(through_origin) < kRootTol) {
    throw DegenerateRadius("crosspolytope: a radicand vanishes at r = " + std::to_string(r));
  }
  const auto signs = gray_code_signs(n - 2);
  std::vector<Line> lines;
  // v_1 = 0: the line misses the origin and p lies on the first axis.
  for (double s : {1.0, -1.0}) {
    for (const auto& sg : signs) {
      CVector q = CVector::Zero(n);
      CVector v = CVector::Zero(n);
      q(0) = s * csqrt(on_axis);
      v(1) = 1.0;
      for (int j = 2; j < n; ++j) v(j) = sg[static_cast<std::size_t>(j - 2)];
      lines.push_back(Line{q, v});
    }
  }
  // p = 0: lines through the origin.
  for (double s : {1.0, -1.0}) {
    for (const auto& sg : signs) {
      CVector v = CVector::Zero(n);
      v(0) = s * csqrt(through_origin);
      v(1) = 1.0;
      for (int j = 2; j < n; ++j) v(j) = sg[static_cast<std::size_t>(j - 2)];
      lines.push_back(Line{CVector::Zero(n), v});
    }
  }
  return finish(crosspolytope_arrangement(params), std::move(lines), reality_tol);
}

std::array<double, 4> perturbed_cubic(const CrosspolytopeParams& p) {
  p.validate();
  const double a = p.a;
  const double k = (p.n - 3) - a * (p.n - 2);
  const Polynomial al = Polynomial::variable(2, 0);
  const Polynomial ga = Polynomial::variable(2, 1);
  const Polynomial be = al * Complex(-(1.0 - a)) + ga * Complex(-k);
  const Polynomial vv = al + be + ga * Complex(p.n - 2.0);
  const Polynomial rest = vv - be;
  const Polynomial cubic = (al + be) * rest * rest * Complex((1.0 - a) * (1.0 - a)) -
                           al * vv * vv * Complex(4.0 * p.r * p.r) +
                           al * vv * rest * Complex(4.0 * a);
  std::array<double, 4> c{};
  for (int e = 0; e <= 3; ++e) {
    Monomial m(2);
    m[0] = static_cast<std::uint16_t>(3 - e);
    m[1] = static_cast<std::uint16_t>(e);
    c[static_cast<std::size_t>(e)] = cubic.coefficient(m).real();
  }
  return c;
}

double cubic_discriminant(const CrosspolytopeParams& p) {
  auto c = perturbed_cubic(p);
  double big = 0.0;
  for (double x : c) big = std::max(big, std::abs(x));
  if (big == 0.0) return 0.0;
  for (double& x : c) x /= big;
  const double A = c[0], B = c[1], C = c[2], D = c[3];
  return 18 * A * B * C * D - 4 * B * B * B * D + B * B * C * C - 4 * A * C * C * C -
         27 * A * A * D * D;
}

SolutionSet perturbed_crosspolytope_tangents(const CrosspolytopeParams& p, double reality_tol) {
  p.validate();
  if (p.a == 1.0) throw InvalidArgument("perturbed crosspolytope needs a != 1; use crosspolytope");
  const int n = p.n;
  const auto c = perturbed_cubic(p);
  double big = 0.0;
  for (double x : c) big = std::max(big, std::abs(x));
  if (std::abs(c[0]) < kRootTol * big || std::abs(c[3]) < kRootTol * big) {
    throw ZeroCoordinateRoot("perturbed crosspolytope: a root has v_1 = 0 or v_3 = 0");
  }
  if (std::abs(cubic_discriminant(p)) < kRootTol) {
    throw DiscriminantVanishes("perturbed crosspolytope: the cubic has a repeated root");
  }
  // Roots of c3 x^3 + c2 x^2 + c1 x + c0 with x = A / G and G = 1.
  Eigen::Matrix3d companion = Eigen::Matrix3d::Zero();
  companion(1, 0) = 1.0;
  companion(2, 1) = 1.0;
  for (int i = 0; i < 3; ++i) companion(i, 2) = -c[static_cast<std::size_t>(3 - i)] / c[0];
  const Eigen::Vector3cd roots = Eigen::EigenSolver<Eigen::Matrix3d>(companion).eigenvalues();

  const double k = (n - 3) - p.a * (n - 2);
  const auto signs = gray_code_signs(n - 1);
  std::vector<Line> lines;
  for (int i = 0; i < 3; ++i) {
    Complex x = roots(i);
    for (int it = 0; it < 3; ++it) {
      const Complex f = ((c[0] * x + c[1]) * x + c[2]) * x + c[3];
      const Complex df = (3.0 * c[0] * x + 2.0 * c[1]) * x + c[2];
      if (df != 0.0) x -= f / df;
    }
    const Complex alpha = x;
    const Complex gamma = 1.0;
    const Complex beta = -(1.0 - p.a) * alpha - k * gamma;
    if (std::abs(beta) < kRootTol * (std::abs(alpha) + 1.0)) {
      throw ZeroCoordinateRoot("perturbed crosspolytope: a root has v_2 = 0");
    }
    const Complex vv = alpha + beta + (n - 2.0) * gamma;
    if (std::abs(vv) < kRootTol * (std::abs(alpha) + std::abs(beta) + 1.0)) {
      throw IsotropicDirection("perturbed crosspolytope: a root has v^2 = 0");
    }
    const Complex v1 = std::sqrt(alpha);
    const Complex v2 = std::sqrt(beta);
    const Complex p2 = (beta - gamma) / (2.0 * vv);
    for (const auto& sg : signs) {
      CVector v(n);
      v(0) = v1;
      v(1) = static_cast<double>(sg[0]) * v2;
      for (int j = 2; j < n; ++j) v(j) = static_cast<double>(sg[static_cast<std::size_t>(j - 1)]);
      CVector q = CVector::Zero(n);
      q(1) = p2;
      q(0) = -p2 * v(1) / v1;
      lines.push_back(Line{q, v});
    }
  }
  return finish(crosspolytope_arrangement(p), std::move(lines), reality_tol);
}

}  // namespace tangentia
