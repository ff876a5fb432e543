#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include "tangentia/errors.hpp"
#include "tangentia/solver.hpp"

namespace tangentia {

namespace {

constexpr double kDivergenceNorm = 1e8;
// Generic roots of the sphere systems stay below ~1e6; endpoints near the
// double and quadruple tetrahedron roots start around 4e7.
constexpr double kSingularCondition = 1e7;
constexpr double kSingularRcond = 1e-15;
constexpr std::size_t kMaxSteps = 20000;

struct Homotopy {
  CompiledSystem start;
  CompiledSystem target;
  Complex gamma;

  // H = (1 - t) gamma G + t F, H_t = F - gamma G
  void evaluate(const CVector& x, double t, CVector& h, CMatrix& hx, CVector& ht) const {
    CVector g, f;
    CMatrix gx, fx;
    start.evaluate(x, g, gx);
    target.evaluate(x, f, fx);
    const Complex a = (1.0 - t) * gamma;
    h = a * g + t * f;
    hx = a * gx + t * fx;
    ht = f - gamma * g;
  }
};

double relative_step(const CVector& dx, const CVector& x) { return dx.norm() / (1.0 + x.norm()); }

// dx/dt = -H_x^{-1} H_t; false when H_x is numerically singular.
bool tangent(const Homotopy& hom, const CVector& x, double t, CVector& dxdt) {
  CVector h, ht;
  CMatrix hx;
  hom.evaluate(x, t, h, hx, ht);
  Eigen::PartialPivLU<CMatrix> lu(hx);
  if (!(lu.rcond() > kSingularRcond)) return false;
  dxdt = -lu.solve(ht);
  return dxdt.allFinite();
}

bool correct(const Homotopy& hom, CVector& x, double t, const TrackerConfig& cfg) {
  CVector h, ht;
  CMatrix hx;
  double previous = 0.0;
  for (int it = 0; it < cfg.newton_max_iters; ++it) {
    hom.evaluate(x, t, h, hx, ht);
    Eigen::PartialPivLU<CMatrix> lu(hx);
    if (!(lu.rcond() > kSingularRcond)) return false;
    const CVector dx = -lu.solve(h);
    if (!dx.allFinite()) return false;
    x += dx;
    const double step = relative_step(dx, x);
    // A large first correction means the predictor left the basin of the
    // path; refuse it rather than risk jumping to a neighbouring path.
    if (it == 0 && step > 0.05) return false;
    if (step <= cfg.newton_tol) return true;
    if (it > 0 && step > 0.5 * previous) return false;
    previous = step;
  }
  return false;
}

bool predict_correct(const Homotopy& hom, const CVector& x, double t, double h,
                     const TrackerConfig& cfg, CVector& out) {
  CVector k1, k2, k3, k4;
  if (!tangent(hom, x, t, k1)) return false;
  if (!tangent(hom, x + 0.5 * h * k1, t + 0.5 * h, k2)) return false;
  if (!tangent(hom, x + 0.5 * h * k2, t + 0.5 * h, k3)) return false;
  if (!tangent(hom, x + h * k3, t + h, k4)) return false;
  out = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  return correct(hom, out, std::min(1.0, t + h), cfg);
}

double coordinate_bound(const CVector& x) { return std::max(1.0, x.cwiseAbs().maxCoeff()); }

double relative_residual(const CompiledSystem& sys, const CVector& x) {
  CVector f;
  Eigen::VectorXd scale;
  sys.evaluate(x, f);
  sys.coefficient_scale(coordinate_bound(x), scale);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    worst = std::max(worst, std::abs(f(i)) / std::max(scale(i), 1e-300));
  }
  return worst;
}

double condition_estimate(const CompiledSystem& sys, const CVector& x) {
  CVector f;
  CMatrix jac;
  Eigen::VectorXd scale;
  sys.evaluate(x, f, jac);
  sys.coefficient_scale(coordinate_bound(x), scale);
  for (Eigen::Index i = 0; i < jac.rows(); ++i) {
    jac.row(i) *= (1.0 + x.norm()) / std::max(scale(i), 1e-300);
  }
  Eigen::JacobiSVD<CMatrix> svd(jac);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return 0.0;
  // Rows are scaled to unit coefficient size, so a regular root keeps
  // sigma_min of order one. At a root where every equation is singular the
  // whole Jacobian shrinks and the plain ratio sigma_max / sigma_min would
  // stay small.
  const double smin = s(s.size() - 1);
  return smin > 0.0 ? std::max(s(0), 1.0) / smin : std::numeric_limits<double>::infinity();
}

RefineResult refine_compiled(const CVector& x0, const CompiledSystem& sys, double tol,
                             int max_iters) {
  RefineResult out{x0, relative_residual(sys, x0), 0, false};
  CVector x = x0;
  CVector f;
  CMatrix jac;
  double previous = 0.0;
  int slow = 0;
  for (int it = 0; it < max_iters; ++it) {
    const double res = relative_residual(sys, x);
    if (res < tol) break;
    sys.evaluate(x, f, jac);
    Eigen::PartialPivLU<CMatrix> lu(jac);
    if (!(lu.rcond() > kSingularRcond)) {
      out.singular = true;
      break;
    }
    const CVector dx = -lu.solve(f);
    if (!dx.allFinite()) {
      out.singular = true;
      break;
    }
    x += dx;
    out.iterations = it + 1;
    const double step = relative_step(dx, x);
    // Quadratic convergence shrinks the ratio to zero; a multiple root
    // keeps it near (m - 1) / m.
    if (it > 0 && previous > 0.0 && step > 0.3 * previous) {
      if (++slow >= 3) out.singular = true;
    } else {
      slow = 0;
    }
    previous = step;
  }
  out.x = x;
  out.residual = relative_residual(sys, x);
  return out;
}

PathResult track_path(const Homotopy& hom, CVector x, const TrackerConfig& cfg, double step_scale) {
  PathResult out;
  double t = 0.0;
  double h = cfg.step_init * step_scale;
  const double hmax = cfg.step_max * step_scale;
  int successes = 0;
  int min_hits = 0;
  bool finished = false;
  CVector next;
  while (!finished) {
    if (t >= 1.0) break;
    if (out.steps++ > kMaxSteps) {
      out.endpoint = x;
      out.status = PathStatus::truncated;
      out.final_residual = relative_residual(hom.target, x);
      return out;
    }
    h = std::min(h, 1.0 - t);
    if (predict_correct(hom, x, t, h, cfg, next)) {
      x = next;
      t = (1.0 - t <= h) ? 1.0 : t + h;
      min_hits = 0;
      if (++successes >= 3) {
        h = std::min(2.0 * h, hmax);
        successes = 0;
      }
      if (!x.allFinite() || x.norm() > kDivergenceNorm) {
        out.endpoint = x;
        out.status = PathStatus::diverged;
        return out;
      }
      continue;
    }
    successes = 0;
    h *= 0.5;
    if (h < cfg.step_min) {
      if (1.0 - t < cfg.endgame_radius) break;
      if (++min_hits >= 2) {
        out.endpoint = x;
        out.status = PathStatus::diverged;
        out.final_residual = relative_residual(hom.target, x);
        return out;
      }
      h = cfg.step_min;
    }
  }
  const RefineResult fin = refine_compiled(x, hom.target, 1e-14, 60);
  out.endpoint = fin.x;
  out.final_residual = fin.residual;
  out.condition_estimate = condition_estimate(hom.target, fin.x);
  if (!fin.x.allFinite() || fin.x.norm() > kDivergenceNorm) {
    out.status = PathStatus::diverged;
  } else if (!(fin.residual < cfg.residual_tol)) {
    out.status = PathStatus::truncated;
  } else if (fin.singular || out.condition_estimate > kSingularCondition) {
    out.status = PathStatus::singular_endpoint;
  } else {
    out.status = PathStatus::converged;
  }
  return out;
}

template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) fn(i);
    });
  }
}

Complex unit_complex(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  return std::polar(1.0, angle(rng));
}

}  // namespace

void TrackerConfig::validate() const {
  if (!(step_min > 0.0 && step_min <= step_init && step_init <= step_max && step_max < 1.0)) {
    throw InvalidArgument("tracker steps must satisfy 0 < step_min <= step_init <= step_max < 1");
  }
  if (!(newton_tol > 0.0 && dedup_tol > 0.0 && singular_dedup_tol > 0.0 && reality_tol > 0.0 &&
        residual_tol > 0.0 && endgame_radius > 0.0)) {
    throw InvalidArgument("tracker tolerances must be positive");
  }
  if (newton_max_iters < 1) throw InvalidArgument("newton_max_iters must be >= 1");
}

std::string to_string(PathStatus s) {
  switch (s) {
    case PathStatus::converged:
      return "converged";
    case PathStatus::diverged:
      return "diverged";
    case PathStatus::truncated:
      return "truncated";
    case PathStatus::singular_endpoint:
      return "singular-endpoint";
  }
  return "unknown";
}

StatusCounts count_statuses(const std::vector<PathResult>& paths) {
  StatusCounts c;
  for (const auto& p : paths) {
    switch (p.status) {
      case PathStatus::converged:
        ++c.converged;
        break;
      case PathStatus::diverged:
        ++c.diverged;
        break;
      case PathStatus::truncated:
        ++c.truncated;
        break;
      case PathStatus::singular_endpoint:
        ++c.singular;
        break;
    }
  }
  return c;
}

StartSystem total_degree_start(const PolySystem& target, std::uint64_t seed) {
  if (!target.is_square()) {
    throw InvalidArgument("total_degree_start: system has " + std::to_string(target.size()) +
                          " equations in " + std::to_string(target.nvars()) + " unknowns");
  }
  for (const auto& p : target.polys()) {
    if (p.is_zero()) throw InvalidArgument("total_degree_start: zero polynomial in system");
  }
  const std::size_t k = target.nvars();
  const std::vector<int> degrees = target.degrees();
  for (int d : degrees) {
    if (d < 1) throw InvalidArgument("total_degree_start: constant polynomial in system");
  }
  std::mt19937_64 rng(seed);
  std::vector<Complex> b(k);
  for (auto& bi : b) bi = unit_complex(rng);

  std::vector<Polynomial> polys;
  for (std::size_t i = 0; i < k; ++i) {
    Polynomial g(k);
    g.add_term(Monomial::unit(k, i, static_cast<std::uint16_t>(degrees[i])), 1.0);
    g.add_term(Monomial(k), -b[i]);
    polys.push_back(std::move(g));
  }

  // Mixed-radix enumeration of the roots of x_i^d_i = b_i.
  std::size_t total = 1;
  for (int d : degrees) total *= static_cast<std::size_t>(d);
  std::vector<CVector> points;
  points.reserve(total);
  std::vector<int> digit(k, 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    CVector x(static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < k; ++i) {
      const double d = degrees[i];
      const double angle = (std::arg(b[i]) + 2.0 * std::numbers::pi * digit[i]) / d;
      x(static_cast<Eigen::Index>(i)) = std::polar(std::pow(std::abs(b[i]), 1.0 / d), angle);
    }
    points.push_back(std::move(x));
    for (std::size_t i = 0; i < k; ++i) {
      if (++digit[i] < degrees[i]) break;
      digit[i] = 0;
    }
  }
  return StartSystem{PolySystem(std::move(polys)), std::move(points)};
}

std::vector<PathResult> track_all(const PolySystem& target, const TrackerConfig& cfg) {
  cfg.validate();
  StartSystem start = total_degree_start(target, cfg.seed);
  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  const Homotopy hom{CompiledSystem(start.system), CompiledSystem(target), unit_complex(rng)};

  const std::size_t count = start.points.size();
  std::vector<PathResult> results(count);
  auto run = [&](std::size_t i, double scale) {
    try {
      results[i] = track_path(hom, start.points[i], cfg, scale);
    } catch (const std::exception&) {
      results[i] = PathResult{start.points[i], PathStatus::truncated, 0.0, 0.0, 0};
    }
  };
  parallel_for(count, cfg.threads, [&](std::size_t i) { run(i, 1.0); });

  // Two paths ending on the same regular root means one of them jumped;
  // failed paths get the same treatment. Retrack both with smaller steps.
  for (double scale : {0.25, 0.0625}) {
    std::vector<std::size_t> redo;
    for (std::size_t i = 0; i < count; ++i) {
      const auto& r = results[i];
      if (r.status == PathStatus::diverged || r.status == PathStatus::truncated) {
        redo.push_back(i);
        continue;
      }
      if (r.status != PathStatus::converged) continue;
      for (std::size_t j = 0; j < count; ++j) {
        if (j == i || results[j].status != PathStatus::converged) continue;
        if ((r.endpoint - results[j].endpoint).norm() < 1e-7 * (1.0 + r.endpoint.norm())) {
          redo.push_back(i);
          break;
        }
      }
    }
    if (redo.empty()) break;
    parallel_for(redo.size(), cfg.threads, [&](std::size_t k) { run(redo[k], scale); });
  }
  return results;
}

RefineResult refine(const CVector& x, const PolySystem& s, double tol, int max_iters) {
  if (!s.is_square()) throw InvalidArgument("refine: system must be square");
  if (static_cast<std::size_t>(x.size()) != s.nvars()) {
    throw DimensionMismatch("refine: dimension mismatch");
  }
  return refine_compiled(x, CompiledSystem(s), tol, max_iters);
}

}  // namespace tangentia
