// One line per acceptance criterion; exit status 1 if any criterion fails.
// The P^4 quadric stretch goal is reported on its own line and does not
// affect the exit status.

#include <chrono>
#include <cstdio>
#include <deque>
#include <functional>
#include <string>

#include "support.hpp"
#include "tangentia/closed_form.hpp"
#include "tangentia/formulation.hpp"
#include "tangentia/solver.hpp"

using namespace tangentia;
using namespace testing_support;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::vector<Line> all_lines(const SolutionSet& s) {
  std::vector<Line> out;
  for (const auto& r : s.records) out.push_back(r.line);
  return out;
}

std::vector<int> multiplicities(const SolutionSet& s) {
  std::vector<int> m;
  for (const auto& r : s.records) m.push_back(r.multiplicity);
  std::sort(m.begin(), m.end());
  return m;
}

bool conjugate_closed(const SolutionSet& s, double tol) {
  const auto lines = all_lines(s);
  for (const auto& r : s.records) {
    if (r.is_real || r.v_isotropic) continue;
    if (worst_match({conjugate_line(r.line)}, lines) > tol) return false;
  }
  return true;
}

// Plucker vector of p + t v as a line in P^n, for projective distances.
CVector plucker_of(const Line& l) {
  const Eigen::Index n = l.p.size();
  CVector x(n + 1), y(n + 1);
  x << Complex(1.0), l.p;
  y << Complex(0.0), l.v;
  return plucker_coordinates(x, y);
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, x);
  return buf;
}

// Closed-form and homotopy sets checked for conjugate closure along the way.
std::vector<const SolutionSet*> g_complex_sets;
std::deque<SolutionSet> g_keep;

const SolutionSet& keep(SolutionSet s) {
  g_keep.push_back(std::move(s));
  return g_keep.back();
}

const std::uint64_t kArrangementSeeds[] = {1003, 1004, 1005, 1006};

Outcome random_counts() {
  Outcome o;
  const auto t0 = Clock::now();
  double worst = 0.0;
  std::string counts;
  for (int n = 3; n <= 6; ++n) {
    const SphereArrangement arr = random_arrangement(n, kArrangementSeeds[n - 3]);
    const SolutionSet s = solve_arrangement(arr, TrackerConfig{});
    counts += (counts.empty() ? "" : "/") + std::to_string(s.total());
    o.require(s.total() == bezout_bound_spheres(n), "n=" + std::to_string(n) + " count " + std::to_string(s.total()));
    for (const auto& r : s.records) {
      worst = std::max({worst, r.residual, max_tangency_oracle(arr, r.line)});
    }
  }
  const double t = seconds_since(t0);
  o.require(worst < 1e-8, "residual " + fmt("%.2e", worst));
  o.require(t < 60.0, "runtime " + fmt("%.1f s", t));
  o.detail = "counts " + counts + ", max residual " + fmt("%.1e", worst) + ", " + fmt("%.2f s", t) +
             (o.detail.empty() ? "" : " (" + o.detail + ")");
  return o;
}

Outcome tetrahedron_cases() {
  Outcome o;
  const SolutionSet a = solve_arrangement(tetrahedron(1.45), TrackerConfig{});
  o.require(a.records.size() == 12 && a.real_count() == 12 && multiplicities(a) == std::vector<int>(12, 1),
            "r=1.45 gave " + std::to_string(a.records.size()) + " lines");
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    for (std::size_t j = i + 1; j < a.records.size(); ++j) {
      o.require(line_gap(a.records[i].line, a.records[j].line) > 1e-4, "r=1.45 lines not distinct");
    }
  }
  const SolutionSet b = solve_arrangement(tetrahedron(std::sqrt(2.0)), TrackerConfig{});
  o.require(multiplicities(b) == std::vector<int>{4, 4, 4}, "r=sqrt2 clusters wrong");
  const SolutionSet c = solve_arrangement(tetrahedron(1.5), TrackerConfig{});
  o.require(multiplicities(c) == std::vector<int>(6, 2), "r=3/2 clusters wrong");
  const TrackerConfig cfg;
  o.detail = "12 real / 3x4 / 6x2 expected; got " + std::to_string(a.real_count()) + " real / " +
             std::to_string(b.records.size()) + " clusters / " + std::to_string(c.records.size()) +
             " clusters (merge tol " + fmt("%g", cfg.dedup_tol) + ", singular " +
             fmt("%g", cfg.singular_dedup_tol) + ")" + (o.detail.empty() ? "" : " " + o.detail);
  return o;
}

Outcome axes_family() {
  Outcome o;
  double worst_res = 0.0, worst_match_d = 0.0;
  for (auto [n, r2] : {std::pair{4, 2.45}, std::pair{5, 2.68}}) {
    const Thm4Params p{n, 2.0, std::sqrt(r2)};
    const SphereArrangement arr = thm4_arrangement(p);
    const SolutionSet& closed = keep(thm4_tangents(p));
    const std::size_t want = 3 * (std::size_t{1} << (n - 1));
    o.require(closed.records.size() == want && closed.real_count() == want,
              "n=" + std::to_string(n) + " closed form " + std::to_string(closed.real_count()) + " real");
    for (const auto& r : closed.records) worst_res = std::max({worst_res, r.residual, max_tangency_oracle(arr, r.line)});
    const SolutionSet& tracked = keep(solve_arrangement(arr, TrackerConfig{}));
    g_complex_sets.push_back(&tracked);
    double d = 0.0;
    for (const auto& r : closed.records) {
      double best = INFINITY;
      for (const auto& t : tracked.records) {
        best = std::min(best, projective_distance(plucker_of(r.line), plucker_of(t.line)));
      }
      d = std::max(d, best);
    }
    worst_match_d = std::max(worst_match_d, d);
  }
  o.require(worst_res < 1e-10, "residual " + fmt("%.2e", worst_res));
  o.require(worst_match_d < 1e-5, "homotopy match " + fmt("%.2e", worst_match_d));
  o.detail = "24 and 48 real, residual " + fmt("%.1e", worst_res) + ", homotopy match " + fmt("%.1e", worst_match_d) +
             (o.detail.empty() ? "" : " (" + o.detail + ")");
  return o;
}

Outcome reality_region_grid() {
  Outcome o;
  const int steps = 100;
  const auto rows5 = region_sample(5, {1.0, 3.0, steps}, {0.0, std::sqrt(3.0), steps});
  auto at = [&](int i, int j) -> const RegionClassification& { return rows5[static_cast<std::size_t>(i * steps + j)]; };
  int inside = 0, interior = 0;
  for (int i = 0; i < steps; ++i) {
    for (int j = 0; j < steps; ++j) {
      const auto& row = at(i, j);
      if (!row.all_real) continue;
      ++inside;
      o.require(row.a * row.a > 2.0 && row.r * row.r < 3.0, "n=5 all-real point outside a^2>2, r^2<3");
      const bool edge = i == 0 || j == 0 || i == steps - 1 || j == steps - 1;
      o.require(!edge, "n=5 region touches the grid boundary");
      if (!edge && at(i - 1, j).all_real && at(i + 1, j).all_real && at(i, j - 1).all_real && at(i, j + 1).all_real) {
        ++interior;
      }
    }
  }
  o.require(interior > 0, "n=5 region has no interior point");
  const auto rows4 = region_sample(4, {1.0, 3.0, steps}, {1.4, 1.75, steps});
  int edge4 = 0;
  for (const auto& row : rows4) edge4 += row.all_real && row.a == 3.0;
  o.require(edge4 > 0, "n=4 region does not reach a = 3");
  o.detail = "n=5: " + std::to_string(inside) + " all-real points, " + std::to_string(interior) +
             " interior; n=4: " + std::to_string(edge4) + " all-real points at a=3" +
             (o.detail.empty() ? "" : " (" + o.detail + ")");
  return o;
}

Outcome crosspolytope_family() {
  Outcome o;
  double worst = 0.0;
  for (int n = 3; n <= 6; ++n) {
    const std::size_t all = std::size_t{1} << n;
    const double lo = std::sqrt(1.0 - 1.0 / (n - 1));
    auto run = [&](double r, std::size_t want_real) {
      const SolutionSet& s = keep(crosspolytope_tangents(n, r));
      g_complex_sets.push_back(&s);
      const SphereArrangement arr = crosspolytope_arrangement({n, r, 1.0});
      o.require(s.records.size() == all && s.real_count() == want_real,
                "n=" + std::to_string(n) + " r=" + fmt("%.3f", r) + ": " + std::to_string(s.real_count()) +
                    " real of " + std::to_string(s.records.size()));
      for (const auto& rec : s.records) worst = std::max({worst, rec.residual, max_tangency_oracle(arr, rec.line)});
    };
    for (double t : {0.2, 0.5, 0.8}) run(lo + t * (1.0 - lo), all);
    run(0.6 * lo, 0);
    run(1.3, all / 2);
  }
  o.require(worst < 1e-10, "residual " + fmt("%.2e", worst));
  o.detail = "n=3..6 window all real, below 0 real, above half real; residual " + fmt("%.1e", worst) +
             (o.detail.empty() ? "" : " (" + o.detail + ")");
  return o;
}

Outcome perturbed_family() {
  Outcome o;
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> ua(-0.9, 3.0), ur(0.3, 2.0);
  double worst = 0.0, smallest_disc = INFINITY;
  int samples = 0;
  for (int n : {4, 5}) {
    const double special = (n - 3.0) / (n - 2.0);
    for (int k = 0; k < 10; ++k) {
      double a = ua(rng);
      while (std::abs(a - 1.0) < 0.2 || std::abs(a - special) < 0.05) a = ua(rng);
      const double r = ur(rng);
      const CrosspolytopeParams p{n, r, a};
      const double disc = std::abs(cubic_discriminant(p));
      smallest_disc = std::min(smallest_disc, disc);
      o.require(disc > 1e-10, "discriminant " + fmt("%.2e", disc));
      try {
        const SolutionSet& s = keep(perturbed_crosspolytope_tangents(p));
        g_complex_sets.push_back(&s);
        const SphereArrangement arr = crosspolytope_arrangement(p);
        o.require(s.records.size() == 3 * (std::size_t{1} << (n - 1)), "count " + std::to_string(s.records.size()));
        for (const auto& rec : s.records) worst = std::max({worst, rec.residual, max_tangency_oracle(arr, rec.line)});
      } catch (const std::exception& e) {
        o.require(false, e.what());
      }
      ++samples;
    }
  }
  o.require(worst < 1e-9, "residual " + fmt("%.2e", worst));
  o.detail = std::to_string(samples) + " samples, 24/48 lines, residual " + fmt("%.1e", worst) +
             ", min |disc| " + fmt("%.1e", smallest_disc) + (o.detail.empty() ? "" : " (" + o.detail + ")");
  return o;
}

std::vector<ProjectiveQuadric> random_quadrics(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<ProjectiveQuadric> qs;
  for (std::size_t k = 0; k < SphereArrangement::expected_count(n); ++k) {
    RMatrix m(n + 1, n + 1);
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; j <= n; ++j) m(i, j) = g(rng);
    }
    qs.emplace_back(CMatrix(((m + m.transpose()) / 2.0).cast<Complex>()));
  }
  return qs;
}

Outcome quadrics_p3() {
  Outcome o;
  const auto t0 = Clock::now();
  const QuadricSolutionSet s = solve_quadrics(random_quadrics(3, 7007), TrackerConfig{});
  const double t = seconds_since(t0);
  o.require(s.isolated_count() == 32, "isolated " + std::to_string(s.isolated_count()));
  o.require(t < 30.0, "runtime " + fmt("%.1f s", t));
  o.detail = std::to_string(s.isolated_count()) + " isolated lines in " + fmt("%.2f s", t) +
             (o.detail.empty() ? "" : " (" + o.detail + ")");
  return o;
}

Outcome quadrics_p4() {
  Outcome o;
  const auto t0 = Clock::now();
  const QuadricSolutionSet s = solve_quadrics(random_quadrics(4, 7008), TrackerConfig{});
  const double t = seconds_since(t0);
  o.require(s.isolated_count() == 320, "isolated " + std::to_string(s.isolated_count()));
  o.detail = std::to_string(s.isolated_count()) + " isolated lines in " + fmt("%.1f s", t) + " (slow)";
  return o;
}

Outcome bound_tables() {
  Outcome o;
  const int ns[] = {3, 4, 5, 6, 7};
  const std::uint64_t spheres[] = {12, 24, 48, 96, 192};
  // The printed quadric entry for n = 5 reads 3580; the formula gives 3584.
  const std::uint64_t quadrics[] = {32, 320, 3584, 43008, 540672};
  for (int i = 0; i < 5; ++i) {
    o.require(bezout_bound_spheres(ns[i]) == spheres[i], "spheres n=" + std::to_string(ns[i]));
    o.require(bezout_bound_quadrics(ns[i]) == quadrics[i], "quadrics n=" + std::to_string(ns[i]));
  }
  o.detail = "spheres 12/24/48/96/192, quadrics 32/320/3584/43008/540672" +
             (o.detail.empty() ? "" : " (" + o.detail + ")");
  return o;
}

Outcome property_suite() {
  Outcome o;
  // Factorization of the regular-simplex cubic, from the Gram coefficients.
  {
    const RMatrix gram = 0.5 * (RMatrix::Identity(3, 3) + RMatrix::Ones(3, 3));
    const RMatrix u = gram.llt().matrixU();
    std::vector<RVector> verts;
    for (int i = 0; i < 3; ++i) verts.push_back(u.col(i));
    const Polynomial c = basis_cubic(cubic_coefficients(verts)) * Complex(1.0 / 0.75);
    std::mt19937_64 rng(9001);
    std::uniform_real_distribution<double> u1(-1.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      CVector t(3);
      for (int i = 0; i < 3; ++i) {
        const double re = u1(rng);
        const double im = u1(rng);
        t(i) = Complex(re, im);
      }
      const Complex f = (t(0) + t(1)) * (t(0) + t(2)) * (t(1) + t(2));
      worst = std::max(worst, std::abs(c.evaluate(t) - f));
    }
    o.require(worst < 1e-12, "factorization " + fmt("%.2e", worst));
  }
  // Conjugate pairs in every set computed above and in the random ones.
  std::size_t sets = 0;
  for (const SolutionSet* s : g_complex_sets) {
    ++sets;
    o.require(conjugate_closed(*s, 1e-6), "a complex line lacks its conjugate");
  }
  // Counts under rigid motions and scalings.
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  int motions = 0;
  for (int n = 3; n <= 5; ++n) {
    const SphereArrangement arr = random_arrangement(n, kArrangementSeeds[n - 3]);
    const SolutionSet base = solve_arrangement(arr, TrackerConfig{});
    ++sets;
    o.require(conjugate_closed(base, 1e-6), "random arrangement lacks a conjugate");
    for (int k = 0; k < 10; ++k) {
      const SphereArrangement moved =
          transformed(arr, random_rotation(rng, n), 3.0 * random_rvector(rng, n), scale(rng));
      const SolutionSet m = solve_arrangement(moved, TrackerConfig{});
      o.require(m.total() == base.total() && m.real_count() == base.real_count(),
                "count changed under motion at n=" + std::to_string(n));
      o.require(conjugate_closed(m, 1e-6), "moved arrangement lacks a conjugate");
      ++motions;
    }
  }
  // Jacobians against central differences.
  {
    std::mt19937_64 g(77);
    const double h = 1e-5;
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<Polynomial> polys;
      for (int k = 0; k < 4; ++k) polys.push_back(random_polynomial(g, 4, 4, 8));
      const PolySystem s(polys);
      const CVector x = random_cvector(g, 4);
      const CMatrix j = jacobian(s, x);
      for (Eigen::Index c = 0; c < 4; ++c) {
        CVector xp = x, xm = x;
        xp(c) += h;
        xm(c) -= h;
        const CVector fd = (evaluate(s, xp) - evaluate(s, xm)) / (2 * h);
        for (Eigen::Index r = 0; r < 4; ++r) {
          worst = std::max(worst, std::abs(fd(r) - j(r, c)) / std::max(1.0, std::abs(j(r, c))));
        }
      }
    }
    o.require(worst < 1e-6, "jacobian " + fmt("%.2e", worst));
  }
  o.detail = "factorization, " + std::to_string(sets) + " sets closed under conjugation, " +
             std::to_string(motions) + " motions, jacobians" + (o.detail.empty() ? "" : " (" + o.detail + ")");
  return o;
}

}  // namespace

int main() {
  struct Item {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Item> items = {
      {"1 random arrangements reach 12/24/48/96", random_counts},
      {"2 tetrahedron 12 real / 3x4 / 6x2", tetrahedron_cases},
      {"3 tetrahedron-plus-axes family all real with homotopy match", axes_family},
      {"4 reality region n=5 bounded, n=4 unbounded", reality_region_grid},
      {"5 crosspolytope window and split", crosspolytope_family},
      {"6 perturbed crosspolytope 3*2^(n-1)", perturbed_family},
      {"7 32 tangents to 4 quadrics in P^3", quadrics_p3},
      {"8 bound tables", bound_tables},
      {"9 property suite", property_suite},
  };
  int failed = 0;
  for (const auto& item : items) {
    Outcome o;
    try {
      o = item.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("threw: ") + e.what();
    }
    failed += o.pass ? 0 : 1;
    std::printf("criterion %s: %s: %s\n", item.name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  Outcome stretch;
  try {
    stretch = quadrics_p4();
  } catch (const std::exception& e) {
    stretch.pass = false;
    stretch.detail = std::string("threw: ") + e.what();
  }
  std::printf("stretch 320 tangents to 6 quadrics in P^4: %s: %s\n", stretch.pass ? "PASS" : "FAIL",
              stretch.detail.c_str());
  std::printf("%d of %zu criteria passed\n", static_cast<int>(items.size()) - failed, items.size());
  return failed == 0 ? 0 : 1;
}
