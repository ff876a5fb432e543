#include "tangentia/formulation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tangentia/errors.hpp"

namespace tangentia {

namespace {

constexpr double kRankTol = 1e-10;

// sum c_i x_i over the first coeffs.size() variables.
Polynomial linear_form(std::size_t nvars, const RVector& coeffs) {
  Polynomial out(nvars);
  for (std::size_t i = 0; i < static_cast<std::size_t>(coeffs.size()); ++i) {
    out.add_term(Monomial::unit(nvars, i), coeffs(static_cast<Eigen::Index>(i)));
  }
  return out;
}

// sum x_i^2 over the first `count` variables.
Polynomial square_norm_form(std::size_t nvars, std::size_t count) {
  Polynomial out(nvars);
  for (std::size_t i = 0; i < count; ++i) out.add_term(Monomial::unit(nvars, i, 2), 1.0);
  return out;
}

void check_dimension_range(int n, const char* what) {
  if (n < 3 || n > 16) {
    throw InvalidArgument(std::string(what) + ": dimension must be in [3, 16], got " +
                          std::to_string(n));
  }
}

std::uint64_t binomial(unsigned top, unsigned k) {
  std::uint64_t c = 1;
  for (unsigned i = 0; i < k; ++i) c = c * (top - i) / (i + 1);
  return c;
}

}  // namespace

ReducedSystem build_reduced_system(const SphereArrangement& arr) {
  const int n = arr.dimension();
  const std::size_t m = arr.size();
  const auto nn = static_cast<std::size_t>(n);

  ReducedSystem red;
  red.n = n;
  red.origin_index = m - 1;
  red.origin_shift = arr[m - 1].center;
  red.base_radius = arr[m - 1].radius;
  red.spheres = arr.spheres();

  RMatrix translated(n, static_cast<Eigen::Index>(m - 1));
  for (std::size_t i = 0; i + 1 < m; ++i) {
    translated.col(static_cast<Eigen::Index>(i)) = arr[i].center - red.origin_shift;
  }
  Eigen::ColPivHouseholderQR<RMatrix> qr(translated);
  const double scale = std::max(1.0, translated.cwiseAbs().maxCoeff());
  qr.setThreshold(kRankTol);
  if (qr.rank() < n || std::abs(qr.matrixR()(n - 1, n - 1)) < kRankTol * scale) {
    throw AffinelyDependentCenters("sphere centers do not affinely span R^" + std::to_string(n));
  }
  const auto& perm = qr.colsPermutation().indices();
  for (int k = 0; k < n; ++k) red.basis_indices.push_back(static_cast<std::size_t>(perm(k)));
  std::sort(red.basis_indices.begin(), red.basis_indices.end());
  for (std::size_t i = 0; i + 1 < m; ++i) {
    if (!std::binary_search(red.basis_indices.begin(), red.basis_indices.end(), i)) {
      red.extra_indices.push_back(i);
    }
  }

  RMatrix basis(n, n);
  for (int k = 0; k < n; ++k) {
    const std::size_t idx = red.basis_indices[static_cast<std::size_t>(k)];
    basis.row(k) = translated.col(static_cast<Eigen::Index>(idx)).transpose();
    red.basis_centers.push_back(translated.col(static_cast<Eigen::Index>(idx)));
    red.basis_radii.push_back(arr[idx].radius);
  }
  red.basis_inverse = basis.partialPivLu().inverse();

  const double r2 = red.base_radius * red.base_radius;
  const Polynomial v2 = square_norm_form(nn, nn);
  // w_i(v) = v^2 c_i^2 - (v.c_i)^2 - v^2 (r_i^2 - r^2): twice v^2 times p.c_i.
  auto rhs = [&](const RVector& c, double radius) {
    const Polynomial vc = linear_form(nn, c);
    return v2 * (c.squaredNorm() - (radius * radius - r2)) - vc * vc;
  };
  std::vector<Polynomial> w;
  for (int k = 0; k < n; ++k) {
    w.push_back(rhs(red.basis_centers[static_cast<std::size_t>(k)],
                    red.basis_radii[static_cast<std::size_t>(k)]));
  }
  // q = M^{-1} w = 2 v^2 p
  std::vector<Polynomial> q;
  for (int j = 0; j < n; ++j) {
    Polynomial qj(nn);
    for (int k = 0; k < n; ++k) qj += w[static_cast<std::size_t>(k)] * Complex(red.basis_inverse(j, k));
    q.push_back(std::move(qj));
  }

  std::vector<Polynomial> eqs;
  Polynomial cubic(nn);
  Polynomial quartic(nn);
  for (std::size_t j = 0; j < nn; ++j) {
    cubic += q[j] * Polynomial::variable(nn, j);
    quartic += q[j] * q[j];
  }
  quartic -= v2 * v2 * Complex(4.0 * r2);
  eqs.push_back(std::move(cubic));
  eqs.push_back(std::move(quartic));
  for (std::size_t e : red.extra_indices) {
    const RVector c = translated.col(static_cast<Eigen::Index>(e));
    Polynomial quad(nn);
    for (std::size_t j = 0; j < nn; ++j) quad += q[j] * Complex(c(static_cast<Eigen::Index>(j)));
    quad -= rhs(c, arr[e].radius);
    eqs.push_back(std::move(quad));
  }
  red.system = PolySystem(std::move(eqs));
  return red;
}

DependentSystem build_dependent_system(const SphereArrangement& arr) {
  const int n = arr.dimension();
  const std::size_t m = arr.size();
  const auto nn = static_cast<std::size_t>(n);
  const std::size_t nvars = nn + 1;

  DependentSystem dep;
  dep.n = n;
  dep.origin_shift = arr[m - 1].center;
  dep.spheres = arr.spheres();
  const double r2 = arr[m - 1].radius * arr[m - 1].radius;

  RMatrix translated(n, static_cast<Eigen::Index>(m - 1));
  for (std::size_t i = 0; i + 1 < m; ++i) {
    translated.col(static_cast<Eigen::Index>(i)) = arr[i].center - dep.origin_shift;
  }
  Eigen::ColPivHouseholderQR<RMatrix> qr(translated);
  const double scale = std::max(1.0, translated.cwiseAbs().maxCoeff());
  const auto& R = qr.matrixR();
  if (std::abs(R(n - 1, n - 1)) >= kRankTol * scale) {
    throw InvalidArgument("sphere centers span R^" + std::to_string(n) +
                          "; use the spanning formulation");
  }
  if (std::abs(R(n - 2, n - 2)) < kRankTol * scale) {
    throw AffinelyDependentCenters("sphere centers span less than a hyperplane of R^" +
                                   std::to_string(n));
  }
  const auto& perm = qr.colsPermutation().indices();
  std::vector<std::size_t> basis_idx;
  for (int k = 0; k < n - 1; ++k) basis_idx.push_back(static_cast<std::size_t>(perm(k)));
  std::sort(basis_idx.begin(), basis_idx.end());

  RMatrix B(n, n - 1);
  for (int k = 0; k < n - 1; ++k) {
    B.col(k) = translated.col(static_cast<Eigen::Index>(basis_idx[static_cast<std::size_t>(k)]));
  }
  // The last column of Q is orthogonal to the span of the centers.
  const RMatrix Q = qr.householderQ();
  dep.normal = Q.col(n - 1);
  const RMatrix lift = B * (B.transpose() * B).inverse();

  const Polynomial v2 = square_norm_form(nvars, nn);
  auto rhs = [&](const RVector& c, double radius) {
    const Polynomial vc = linear_form(nvars, c);
    return v2 * (c.squaredNorm() - (radius * radius - r2)) - vc * vc;
  };
  std::vector<Polynomial> w;
  for (std::size_t k = 0; k + 1 < nn; ++k) {
    w.push_back(rhs(B.col(static_cast<Eigen::Index>(k)), arr[basis_idx[k]].radius));
  }
  // 2 v^2 p = q_H + sigma * normal, q_H in the span of the centers.
  for (int j = 0; j < n; ++j) {
    Polynomial qj(nvars);
    for (int k = 0; k < n - 1; ++k) qj += w[static_cast<std::size_t>(k)] * Complex(lift(j, k));
    dep.q_span.push_back(std::move(qj));
  }
  const Polynomial sigma = Polynomial::variable(nvars, nn);
  Polynomial cubic = sigma * linear_form(nvars, dep.normal);
  Polynomial quartic = sigma * sigma - v2 * v2 * Complex(4.0 * r2);
  for (std::size_t j = 0; j < nn; ++j) {
    cubic += dep.q_span[j] * Polynomial::variable(nvars, j);
    quartic += dep.q_span[j] * dep.q_span[j];
  }
  dep.equations.push_back(std::move(cubic));
  dep.equations.push_back(std::move(quartic));
  for (std::size_t i = 0; i + 1 < m; ++i) {
    if (std::binary_search(basis_idx.begin(), basis_idx.end(), i)) continue;
    const RVector c = translated.col(static_cast<Eigen::Index>(i));
    Polynomial quad(nvars);
    for (std::size_t j = 0; j < nn; ++j) quad += dep.q_span[j] * Complex(c(static_cast<Eigen::Index>(j)));
    quad -= rhs(c, arr[i].radius);
    dep.equations.push_back(std::move(quad));
  }
  return dep;
}

CVector back_substitute_p(const CVector& v, const ReducedSystem& red) {
  if (v.size() != red.n) throw DimensionMismatch("back_substitute_p: dimension mismatch");
  const Complex v2 = dot(v, v);
  if (std::abs(v2) <= 1e-14 * v.squaredNorm()) {
    throw IsotropicDirection("back_substitute_p: v^2 vanishes");
  }
  const double r2 = red.base_radius * red.base_radius;
  CVector w(red.n);
  for (int k = 0; k < red.n; ++k) {
    const RVector& c = red.basis_centers[static_cast<std::size_t>(k)];
    const double rk = red.basis_radii[static_cast<std::size_t>(k)];
    const Complex vc = dot(v, c);
    w(k) = v2 * (c.squaredNorm() - (rk * rk - r2)) - vc * vc;
  }
  const CVector p = red.basis_inverse.cast<Complex>() * w / (2.0 * v2) +
                    red.origin_shift.cast<Complex>();
  return normalize_moment(p, v).p;
}

CubicCoefficients cubic_coefficients(const std::vector<RVector>& centers) {
  const int n = static_cast<int>(centers.size());
  RMatrix gram(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) gram(i, j) = centers[i].dot(centers[j]);
  }
  CubicCoefficients out;
  out.n = n;
  out.alpha = RMatrix::Zero(n, n);
  out.beta.assign(static_cast<std::size_t>(n * n * n), 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) out.alpha(i, j) = gram(i, i) * gram(j, j) - gram(i, j) * gram(j, i);
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        const double d1 = gram(i, j) * gram(k, k) - gram(i, k) * gram(k, j);
        const double d2 = gram(i, k) * gram(j, j) - gram(i, j) * gram(j, k);
        const double d3 = gram(j, k) * gram(i, i) - gram(j, i) * gram(i, k);
        out.beta[static_cast<std::size_t>((i * n + j) * n + k)] = d1 + d2 + d3;
      }
    }
  }
  return out;
}

Polynomial basis_cubic(const CubicCoefficients& coeffs) {
  const auto n = static_cast<std::size_t>(coeffs.n);
  Polynomial out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      Monomial m(n);
      m[i] = 2;
      m[j] = 1;
      out.add_term(m, coeffs.alpha(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        Monomial m(n);
        m[i] = m[j] = m[k] = 1;
        out.add_term(m, 2.0 * coeffs.beta_at(static_cast<int>(i), static_cast<int>(j),
                                             static_cast<int>(k)));
      }
    }
  }
  return out;
}

Polynomial simplex_cubic(int n) {
  if (n < 3) throw InvalidArgument("simplex_cubic: n must be >= 3");
  CubicCoefficients unit;
  unit.n = n;
  unit.alpha = RMatrix::Ones(n, n) - RMatrix::Identity(n, n);
  unit.beta.assign(static_cast<std::size_t>(n * n * n), 1.0);
  return basis_cubic(unit);
}

std::vector<RVector> dual_basis(const std::vector<RVector>& basis) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  RMatrix cols(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (basis[static_cast<std::size_t>(j)].size() != n) {
      throw DimensionMismatch("dual_basis: need n vectors of dimension n");
    }
    cols.col(j) = basis[static_cast<std::size_t>(j)];
  }
  Eigen::FullPivLU<RMatrix> lu(cols);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) throw SingularBasis("dual_basis: vectors are linearly dependent");
  const RMatrix dual = lu.inverse().transpose();
  std::vector<RVector> out;
  for (Eigen::Index i = 0; i < n; ++i) out.push_back(dual.col(i));
  return out;
}

ProjectiveQuadric::ProjectiveQuadric(CMatrix m) : q(std::move(m)) {
  if (q.rows() != q.cols() || q.rows() < 2) {
    throw DimensionMismatch("quadric matrix must be square of size >= 2");
  }
  const double scale = std::max(1e-300, q.cwiseAbs().maxCoeff());
  if ((q - q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw InvalidArgument("quadric matrix must be symmetric");
  }
  q = 0.5 * (q + q.transpose()).eval();
}

ProjectiveQuadric ProjectiveQuadric::normalized() const {
  const double f = q.norm();
  if (f == 0.0) throw InvalidArgument("zero quadric");
  return ProjectiveQuadric(q / f);
}

ProjectiveQuadric homogenize_sphere(const Sphere& s) {
  const auto n = s.center.size();
  CMatrix q = CMatrix::Zero(n + 1, n + 1);
  q(0, 0) = s.center.squaredNorm() - s.radius * s.radius;
  for (Eigen::Index i = 0; i < n; ++i) {
    q(0, i + 1) = q(i + 1, 0) = -s.center(i);
    q(i + 1, i + 1) = 1.0;
  }
  return ProjectiveQuadric(q);
}

ProjectiveQuadric quadric_at_infinity(int n) {
  CMatrix q = CMatrix::Identity(n + 1, n + 1);
  q(0, 0) = 0.0;
  return ProjectiveQuadric(q);
}

std::vector<std::pair<int, int>> plucker_pairs(int n) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) out.emplace_back(i, j);
  }
  return out;
}

CVector plucker_coordinates(const CVector& x, const CVector& y) {
  if (x.size() != y.size()) throw DimensionMismatch("plucker_coordinates: dimension mismatch");
  const auto pairs = plucker_pairs(static_cast<int>(x.size()) - 1);
  CVector p(static_cast<Eigen::Index>(pairs.size()));
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [i, j] = pairs[k];
    p(static_cast<Eigen::Index>(k)) = x(i) * y(j) - x(j) * y(i);
  }
  return p;
}

Polynomial plucker_tangency_form(const ProjectiveQuadric& quadric) {
  const CMatrix& q = quadric.q;
  const auto pairs = plucker_pairs(quadric.dimension());
  const std::size_t nv = pairs.size();
  Polynomial out(nv);
  for (std::size_t a = 0; a < nv; ++a) {
    for (std::size_t b = a; b < nv; ++b) {
      const auto [i, j] = pairs[a];
      const auto [k, l] = pairs[b];
      const Complex c = q(i, k) * q(j, l) - q(i, l) * q(j, k);
      Monomial m(nv);
      m[a] += 1;
      m[b] += 1;
      out.add_term(m, a == b ? c : 2.0 * c);
    }
  }
  return out;
}

std::vector<Polynomial> plucker_relations(int n) {
  const auto pairs = plucker_pairs(n);
  const std::size_t nv = pairs.size();
  auto index = [&](int i, int j) {
    return static_cast<std::size_t>(
        std::find(pairs.begin(), pairs.end(), std::make_pair(i, j)) - pairs.begin());
  };
  auto product = [&](int i, int j, int k, int l) {
    Monomial m(nv);
    m[index(i, j)] += 1;
    m[index(k, l)] += 1;
    return m;
  };
  std::vector<Polynomial> out;
  for (int i = 0; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      for (int k = j + 1; k <= n; ++k) {
        for (int l = k + 1; l <= n; ++l) {
          Polynomial rel(nv);
          rel.add_term(product(i, j, k, l), 1.0);
          rel.add_term(product(i, k, j, l), -1.0);
          rel.add_term(product(i, l, j, k), 1.0);
          out.push_back(std::move(rel));
        }
      }
    }
  }
  return out;
}

std::uint64_t bezout_bound_spheres(int n) {
  check_dimension_range(n, "bezout_bound_spheres");
  return std::uint64_t{3} << (n - 1);
}

std::uint64_t grassmannian_degree(int n) {
  check_dimension_range(n, "grassmannian_degree");
  const auto k = static_cast<unsigned>(n - 1);
  return binomial(2 * k, k) / static_cast<std::uint64_t>(n);
}

std::uint64_t bezout_bound_quadrics(int n) {
  check_dimension_range(n, "bezout_bound_quadrics");
  return (std::uint64_t{1} << (2 * n - 2)) * grassmannian_degree(n);
}

}  // namespace tangentia
