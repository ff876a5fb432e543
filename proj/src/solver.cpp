#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

#include "tangentia/errors.hpp"
#include "tangentia/kernels.hpp"
#include "tangentia/solver.hpp"

namespace tangentia {

namespace {

// Share of paths allowed to end on a positive-dimensional component.
constexpr double kNonFiniteShare = 0.2;
// Relative size of p_0j below which a Plucker vector is a line at infinity.
constexpr double kInfinityTol = 1e-6;
// Residual accepted for endpoints at infinity.
constexpr double kExcessResidual = 1e-4;

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

// Groups items by a distance. A pair with a singular member uses the looser
// tolerance. Groups come out ordered by their first member.
std::vector<std::vector<std::size_t>> cluster_by(
    std::size_t m, const std::function<double(std::size_t, std::size_t)>& dist,
    const std::vector<bool>& singular, double tol, double singular_tol, bool strict = true) {
  UnionFind uf(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double t = (singular[i] || singular[j]) ? singular_tol : tol;
      if (dist(i, j) < t) uf.unite(i, j);
    }
  }
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::size_t> slot(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t root = uf.find(i);
    if (slot[root] == m) {
      slot[root] = groups.size();
      groups.emplace_back();
    }
    groups[slot[root]].push_back(i);
  }
  for (const auto& g : groups) {
    if (!strict) break;
    bool any_singular = false;
    for (std::size_t i : g) any_singular = any_singular || singular[i];
    const double t = any_singular ? singular_tol : tol;
    for (std::size_t a = 0; a < g.size(); ++a) {
      for (std::size_t b = a + 1; b < g.size(); ++b) {
        if (dist(g[a], g[b]) > 2.0 * t) {
          throw UnresolvedCluster("endpoint cluster of size " + std::to_string(g.size()) +
                                  " chains beyond the merge tolerance " + std::to_string(t));
        }
      }
    }
  }
  return groups;
}

std::vector<std::vector<std::size_t>> cluster_points(const std::vector<CVector>& pts,
                                                     const std::vector<bool>& singular, double tol,
                                                     double singular_tol, bool strict = true) {
  return cluster_by(
      pts.size(), [&](std::size_t i, std::size_t j) { return projective_distance(pts[i], pts[j]); },
      singular, tol, singular_tol, strict);
}

Eigen::Index max_modulus_index(const CVector& x) {
  Eigen::Index k = 0;
  x.cwiseAbs().maxCoeff(&k);
  return k;
}

// Scales every member to the same chart before averaging, so that the
// branches around a multiple root cancel to first order.
CVector cluster_average(const std::vector<CVector>& pts, const std::vector<std::size_t>& group) {
  const Eigen::Index k = max_modulus_index(pts[group.front()]);
  CVector sum = CVector::Zero(pts[group.front()].size());
  for (std::size_t i : group) sum += pts[i] / pts[i](k);
  return sum / static_cast<double>(group.size());
}

CVector normalized_by_max(const CVector& x) { return x / x(max_modulus_index(x)); }

bool is_real_vector(const CVector& x, double tol) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (std::abs(x(i).imag()) > tol * std::max(1.0, std::abs(x(i).real()))) return false;
  }
  return true;
}

// Rounded coordinates first so nearly equal runs order the same way on
// every platform; exact values break the remaining ties.
std::vector<double> sort_key(const CVector& a, const CVector& b) {
  std::vector<double> key;
  for (const CVector* x : {&a, &b}) {
    for (Eigen::Index i = 0; i < x->size(); ++i) key.push_back(std::round((*x)(i).real() * 1e6));
    for (Eigen::Index i = 0; i < x->size(); ++i) key.push_back(std::round((*x)(i).imag() * 1e6));
  }
  for (const CVector* x : {&a, &b}) {
    for (Eigen::Index i = 0; i < x->size(); ++i) {
      key.push_back((*x)(i).real());
      key.push_back((*x)(i).imag());
    }
  }
  return key;
}

bool usable(PathStatus s) {
  return s == PathStatus::converged || s == PathStatus::singular_endpoint;
}

CVector random_patch(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x5851f42d4c957f2dULL);
  std::normal_distribution<double> g(0.0, 1.0);
  CVector l(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < l.size(); ++i) {
    const double re = g(rng);
    const double im = g(rng);
    l(i) = Complex(re, im);
  }
  return l;
}

// Fills residuals and sorts records into their canonical order.
void finish_records(SolutionSet& out, const SphereArrangement& arr) {
  std::vector<Line> lines;
  for (const auto& r : out.records) lines.push_back(r.line);
  if (!lines.empty()) {
    std::vector<double> res(lines.size());
    kernels::max_tangency_residuals(arr, kernels::LineBatch::from_lines(lines), res);
    for (std::size_t i = 0; i < lines.size(); ++i) out.records[i].residual = res[i];
  }

  std::vector<std::pair<std::vector<double>, std::size_t>> keys;
  for (std::size_t i = 0; i < out.records.size(); ++i) {
    keys.emplace_back(sort_key(out.records[i].line.v, out.records[i].line.p), i);
  }
  std::sort(keys.begin(), keys.end());
  std::vector<SolutionRecord> sorted;
  for (const auto& k : keys) sorted.push_back(out.records[k.second]);
  out.records = std::move(sorted);
}

}  // namespace

std::size_t SolutionSet::total() const {
  std::size_t t = 0;
  for (const auto& r : records) t += static_cast<std::size_t>(r.multiplicity);
  return t;
}

std::size_t SolutionSet::real_count() const {
  std::size_t t = 0;
  for (const auto& r : records) {
    if (r.is_real) t += static_cast<std::size_t>(r.multiplicity);
  }
  return t;
}

SolutionSet deduplicate_and_classify(const std::vector<PathResult>& paths, const ReducedSystem& red,
                                     const AffinePatch& patch, const TrackerConfig& cfg) {
  SolutionSet out;
  out.raw_path_count = paths.size();
  out.patch = patch.functional;
  out.config = cfg;
  out.statuses = count_statuses(paths);

  std::vector<CVector> dirs;
  std::vector<bool> singular;
  for (const auto& path : paths) {
    if (!usable(path.status)) continue;
    dirs.push_back(patch.lift(path.endpoint));
    singular.push_back(path.status == PathStatus::singular_endpoint);
  }
  const auto groups = cluster_points(dirs, singular, cfg.dedup_tol, cfg.singular_dedup_tol);

  for (const auto& g : groups) {
    if (g.size() == 1 && singular[g.front()]) ++out.unclustered_singular;
    SolutionRecord rec;
    rec.multiplicity = static_cast<int>(g.size());
    CVector v = normalized_by_max(cluster_average(dirs, g));
    rec.v_isotropic = is_isotropic(v);
    if (rec.v_isotropic) {
      rec.line = Line{CVector::Zero(v.size()), v};
      rec.is_real = false;
      out.records.push_back(std::move(rec));
      continue;
    }
    rec.line = Line{back_substitute_p(v, red), v};
    if (is_real_line(rec.line, cfg.reality_tol)) {
      // Snap to the real representative; p is recomputed from the real v.
      const CVector vr = v.real().cast<Complex>();
      rec.line = Line{back_substitute_p(vr, red).real().cast<Complex>(), vr};
      rec.is_real = true;
    }
    out.records.push_back(std::move(rec));
  }

  finish_records(out, SphereArrangement(red.n, red.spheres));
  return out;
}

SolutionSet solve_arrangement(const SphereArrangement& arr, const TrackerConfig& cfg,
                              PatchSpec spec) {
  cfg.validate();
  const ReducedSystem red = build_reduced_system(arr);
  const std::size_t n = static_cast<std::size_t>(arr.dimension());
  if (!spec.random && spec.index >= n) {
    throw InvalidArgument("patch index " + std::to_string(spec.index) + " out of range for n = " +
                          std::to_string(n));
  }
  const AffinePatch patch = spec.random ? AffinePatch(random_patch(n, cfg.seed))
                                        : AffinePatch::coordinate(n, spec.index);
  const PolySystem target = substitute_affine_patch(red.system, patch);
  const auto paths = track_all(target, cfg);
  SolutionSet out = deduplicate_and_classify(paths, red, patch, cfg);
  if (static_cast<double>(out.unclustered_singular) > kNonFiniteShare * static_cast<double>(paths.size())) {
    throw NonFiniteSolutionSet(std::to_string(out.unclustered_singular) + " of " +
                               std::to_string(paths.size()) +
                               " paths end on isolated singular points");
  }
  return out;
}

SolutionSet solve_dependent_arrangement(const SphereArrangement& arr, const TrackerConfig& cfg) {
  cfg.validate();
  const DependentSystem dep = build_dependent_system(arr);
  const std::size_t n = static_cast<std::size_t>(dep.n);
  const AffinePatch patch(random_patch(n, cfg.seed));

  // v from the chart, sigma passed through as the last variable.
  const std::size_t k = patch.eliminated;
  const Complex lk = patch.functional(static_cast<Eigen::Index>(k));
  std::vector<Polynomial> subs(n + 1, Polynomial(n));
  Polynomial eliminated = Polynomial::constant(n, 1.0 / lk);
  for (std::size_t i = 0, j = 0; i < n; ++i) {
    if (i == k) continue;
    eliminated -= Polynomial::variable(n, j) * (patch.functional(static_cast<Eigen::Index>(i)) / lk);
    subs[i] = Polynomial::variable(n, j);
    ++j;
  }
  subs[k] = eliminated;
  subs[n] = Polynomial::variable(n, n - 1);
  std::vector<Polynomial> eqs;
  for (const auto& e : dep.equations) eqs.push_back(e.compose(subs));
  const auto paths = track_all(PolySystem(std::move(eqs)), cfg);

  SolutionSet out;
  out.raw_path_count = paths.size();
  out.patch = patch.functional;
  out.config = cfg;
  out.statuses = count_statuses(paths);

  // Distinct lines may share a direction here, so endpoints are compared as
  // lines: direction projectively, normalized moment point directly.
  const auto nn = static_cast<Eigen::Index>(n);
  std::vector<Line> lines;
  std::vector<bool> isotropic;
  std::vector<bool> singular;
  for (const auto& path : paths) {
    if (!usable(path.status)) continue;
    const CVector v = patch.lift(path.endpoint.head(nn - 1));
    const Complex sigma = path.endpoint(nn - 1);
    const bool iso = is_isotropic(v);
    CVector p = CVector::Zero(nn);
    if (!iso) {
      CVector vs(nn + 1);
      vs << v, sigma;
      const Complex vv = v.transpose() * v;
      CVector q(nn);
      for (std::size_t j = 0; j < n; ++j) q(static_cast<Eigen::Index>(j)) = dep.q_span[j].evaluate(vs);
      p = normalize_moment((q + sigma * dep.normal.cast<Complex>()) / (2.0 * vv) +
                               dep.origin_shift.cast<Complex>(),
                           v)
              .p;
    }
    lines.push_back(Line{p, v});
    isotropic.push_back(iso);
    singular.push_back(path.status == PathStatus::singular_endpoint);
  }
  const auto dist = [&](std::size_t i, std::size_t j) {
    const double scale = 1.0 + std::max(lines[i].p.norm(), lines[j].p.norm());
    return std::max(projective_distance(lines[i].v, lines[j].v),
                    (lines[i].p - lines[j].p).norm() / scale);
  };
  const auto groups =
      cluster_by(lines.size(), dist, singular, cfg.dedup_tol, cfg.singular_dedup_tol);
  std::vector<CVector> dirs;
  for (const auto& l : lines) dirs.push_back(l.v);
  for (const auto& g : groups) {
    if (g.size() == 1 && singular[g.front()]) ++out.unclustered_singular;
    SolutionRecord rec;
    rec.multiplicity = static_cast<int>(g.size());
    const CVector v = normalized_by_max(cluster_average(dirs, g));
    CVector p = CVector::Zero(nn);
    for (std::size_t i : g) p += lines[i].p;
    p /= static_cast<double>(g.size());
    rec.v_isotropic = isotropic[g.front()] || is_isotropic(v);
    rec.line = Line{p, v};
    if (!rec.v_isotropic && is_real_line(rec.line, cfg.reality_tol)) {
      rec.line = Line{p.real().cast<Complex>(), v.real().cast<Complex>()};
      rec.is_real = true;
    }
    out.records.push_back(std::move(rec));
  }
  finish_records(out, arr);
  return out;
}

std::size_t QuadricSolutionSet::isolated_count() const {
  std::size_t t = 0;
  for (const auto& r : records) t += static_cast<std::size_t>(r.multiplicity);
  return t;
}

QuadricSolutionSet solve_quadrics(const std::vector<ProjectiveQuadric>& quadrics,
                                  const TrackerConfig& cfg) {
  cfg.validate();
  if (quadrics.empty()) throw InvalidArgument("solve_quadrics: no quadrics given");
  const int n = quadrics.front().dimension();
  if (n != 3 && n != 4) {
    throw InvalidArgument("solve_quadrics: supported for n = 3 and 4, got n = " + std::to_string(n));
  }
  if (quadrics.size() != SphereArrangement::expected_count(n)) {
    throw InvalidArgument("solve_quadrics: expected 2n-2 = " +
                          std::to_string(SphereArrangement::expected_count(n)) + " quadrics, got " +
                          std::to_string(quadrics.size()));
  }
  std::vector<Polynomial> originals = plucker_relations(n);
  for (const auto& q : quadrics) {
    if (q.dimension() != n) throw DimensionMismatch("solve_quadrics: quadrics of mixed dimension");
    originals.push_back(plucker_tangency_form(q.normalized()));
  }
  const std::size_t nvars = originals.front().nvars();

  std::mt19937_64 rng(cfg.seed ^ 0x2545f4914f6cdd1dULL);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Polynomial> squared;
  if (originals.size() == nvars - 1) {
    squared = originals;
  } else {
    // Overdetermined on the patch: random combinations keep every common
    // root and add extraneous ones, removed below.
    for (std::size_t k = 0; k + 1 < nvars; ++k) {
      Polynomial comb(nvars);
      for (const auto& f : originals) {
        const double re = g(rng);
        const double im = g(rng);
        comb += f * Complex(re, im);
      }
      squared.push_back(std::move(comb));
    }
  }
  CVector l(static_cast<Eigen::Index>(nvars));
  for (Eigen::Index i = 0; i < l.size(); ++i) {
    const double re = g(rng);
    const double im = g(rng);
    l(i) = Complex(re, im);
  }
  const AffinePatch patch(l);
  const PolySystem target = substitute_affine_patch(PolySystem(squared), patch);
  const auto paths = track_all(target, cfg);

  QuadricSolutionSet out;
  out.n = n;
  out.raw_path_count = paths.size();
  out.statuses = count_statuses(paths);

  std::vector<CVector> genuine;
  std::vector<bool> singular;
  std::vector<double> residuals;
  std::vector<bool> infinite;
  for (const auto& path : paths) {
    if (path.status == PathStatus::diverged || !path.endpoint.allFinite()) continue;
    const CVector x = normalized_by_max(patch.lift(path.endpoint));
    double worst = 0.0;
    for (const auto& f : originals) worst = std::max(worst, std::abs(f.evaluate(x)));
    // Pairs (0, j) come first in the lexicographic order.
    const bool at_infinity = x.head(n).cwiseAbs().maxCoeff() < kInfinityTol;
    // Paths into an excess component end on a nonreduced curve, where the
    // tracker stalls well short of full accuracy; their status is not
    // informative, only where they end.
    if (at_infinity && worst < kExcessResidual) {
      genuine.push_back(x);
      singular.push_back(true);
      residuals.push_back(worst);
      infinite.push_back(true);
      continue;
    }
    if (!usable(path.status)) continue;
    if (worst >= cfg.residual_tol) {
      ++out.extraneous_paths;
      continue;
    }
    genuine.push_back(x);
    singular.push_back(path.status == PathStatus::singular_endpoint);
    residuals.push_back(worst);
    infinite.push_back(at_infinity);
  }

  // Endpoints on a solution curve at infinity scatter along it, so they are
  // merged loosely and never treated as an ambiguous cluster.
  for (bool at_infinity : {false, true}) {
    std::vector<CVector> pts;
    std::vector<bool> sing;
    std::vector<double> res;
    for (std::size_t i = 0; i < genuine.size(); ++i) {
      if (infinite[i] != at_infinity) continue;
      pts.push_back(genuine[i]);
      sing.push_back(singular[i]);
      res.push_back(residuals[i]);
    }
    const auto groups =
        cluster_points(pts, sing, cfg.dedup_tol, cfg.singular_dedup_tol, !at_infinity);
    for (const auto& grp : groups) {
      ProjectiveLineRecord rec;
      rec.plucker = normalized_by_max(cluster_average(pts, grp));
      rec.multiplicity = static_cast<int>(grp.size());
      for (std::size_t i : grp) rec.residual = std::max(rec.residual, res[i]);
      rec.is_real = is_real_vector(rec.plucker, cfg.reality_tol);
      rec.at_infinity = at_infinity;
      // A lone singular endpoint lies on a positive-dimensional component.
      if (at_infinity || (grp.size() == 1 && sing[grp.front()])) {
        out.excess_paths += grp.size();
        out.excess.push_back(std::move(rec));
      } else {
        out.records.push_back(std::move(rec));
      }
    }
  }
  auto by_key = [](const ProjectiveLineRecord& a, const ProjectiveLineRecord& b) {
    const CVector none(0);
    return sort_key(a.plucker, none) < sort_key(b.plucker, none);
  };
  std::sort(out.records.begin(), out.records.end(), by_key);
  std::sort(out.excess.begin(), out.excess.end(), by_key);
  return out;
}

}  // namespace tangentia
