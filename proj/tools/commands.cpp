#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <random>

#include "tangentia/closed_form.hpp"
#include "tangentia/errors.hpp"
#include "tangentia/formulation.hpp"
#include "tangentia/io.hpp"

namespace tangentia::cli {

namespace {

constexpr std::uint64_t kFallbackSeed = 20021;
std::uint64_t default_seed() {
  if (const char* env = std::getenv("TANGENTIA_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0') return v;
  }
  return kFallbackSeed;
}

struct Common {
  std::uint64_t seed = default_seed();
  double tol_residual = kDefaultResidualTol;
  double tol_dedup = TrackerConfig{}.dedup_tol;
  double tol_reality = kDefaultRealityTol;
  std::string patch = "random";
  std::string format = "json";
  std::string out_path;
  unsigned threads = 0;

  void attach(CLI::App* app, const std::string& default_format = "json") {
    format = default_format;
    app->add_option("--seed", seed, "Random seed (default: TANGENTIA_SEED or 20021)");
    app->add_option("--tol-residual", tol_residual, "Residual tolerance")->check(CLI::PositiveNumber);
    app->add_option("--tol-dedup", tol_dedup, "Endpoint merge tolerance")->check(CLI::PositiveNumber);
    app->add_option("--tol-reality", tol_reality, "Reality tolerance")->check(CLI::PositiveNumber);
    app->add_option("--patch", patch, "Affine patch: random or index:<i>");
    app->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    app->add_option("--out", out_path, "Write the result here instead of stdout");
    app->add_option("--threads", threads, "Tracking threads (0 = all cores)");
  }

  TrackerConfig config() const {
    TrackerConfig cfg;
    cfg.seed = seed;
    cfg.residual_tol = tol_residual;
    cfg.dedup_tol = tol_dedup;
    cfg.reality_tol = tol_reality;
    cfg.threads = threads;
    return cfg;
  }

  PatchSpec patch_spec() const {
    if (patch == "random") return PatchSpec{};
    const std::string prefix = "index:";
    if (patch.rfind(prefix, 0) == 0) {
      const std::string digits = patch.substr(prefix.size());
      if (!digits.empty() && std::all_of(digits.begin(), digits.end(), ::isdigit)) {
        return PatchSpec{false, static_cast<std::size_t>(std::stoull(digits))};
      }
    }
    throw InvalidArgument("--patch must be \"random\" or \"index:<i>\", got \"" + patch + "\"");
  }
};

std::string summary_line(int n, const SolutionSet& s) {
  return "n=" + std::to_string(n) + " total=" + std::to_string(s.total()) +
         " real=" + std::to_string(s.real_count()) +
         " max=" + std::to_string(bezout_bound_spheres(n));
}

// With --out the document goes to the file and the summary to stdout;
// otherwise the document owns stdout and the summary goes to stderr.
void emit(const Common& c, const std::string& document, const std::string& summary,
          std::ostream& out, std::ostream& err) {
  if (!c.out_path.empty()) {
    io::write_text_file(c.out_path, document);
    if (!summary.empty()) out << summary << '\n';
  } else {
    out << document;
    if (!summary.empty()) err << summary << '\n';
  }
}

std::string solution_document(const Common& c, const SolutionSet& s, int n) {
  if (c.format == "csv") return io::solutions_to_csv(s);
  return io::solutions_to_json(s, n).dump(2) + "\n";
}

double max_matching_distance(const SolutionSet& reference, const SolutionSet& candidate) {
  double worst = 0.0;
  for (const auto& r : reference.records) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : candidate.records) {
      if (!c.v_isotropic) best = std::min(best, line_distance(r.line, c.line));
    }
    worst = std::max(worst, best);
  }
  return worst;
}

std::string describe(const VerifyIssue& issue) {
  if (issue.index < 0) return "set: " + issue.message;
  return "record " + std::to_string(issue.index) + ": " + issue.message;
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", x);
  return buf;
}

}  // namespace

std::vector<VerifyIssue> verify_solutions(const SphereArrangement& arr, const SolutionSet& s,
                                          const VerifyTolerances& tol) {
  std::vector<VerifyIssue> issues;
  const int n = arr.dimension();
  std::size_t total = 0;
  for (std::size_t i = 0; i < s.records.size(); ++i) {
    const auto& rec = s.records[i];
    const long idx = static_cast<long>(i);
    total += static_cast<std::size_t>(rec.multiplicity);
    if (rec.line.p.size() != n || rec.line.v.size() != n) {
      issues.push_back({idx, "expected " + std::to_string(n) + " coordinates"});
      continue;
    }
    if (rec.line.v.cwiseAbs().maxCoeff() == 0.0) {
      issues.push_back({idx, "direction is zero"});
      continue;
    }
    const Line l = normalize_direction(rec.line);
    const double res = max_tangency_residual(arr, l);
    if (!(res < tol.residual)) {
      issues.push_back({idx, "tangency residual " + sci(res) + " exceeds " + sci(tol.residual)});
    }
    const double pv = std::abs(dot(l.p, l.v)) / (1.0 + l.p.norm());
    if (!(pv < tol.residual)) {
      issues.push_back({idx, "p.v = " + sci(pv) + " is not zero"});
    }
    if (is_isotropic(l.v)) {
      issues.push_back({idx, "direction is isotropic"});
      continue;
    }
    const bool real = is_real_line(l, tol.reality);
    if (real != rec.is_real) {
      issues.push_back({idx, std::string("reality flag says ") + (rec.is_real ? "real" : "complex") +
                                 " but the line is " + (real ? "real" : "complex")});
    }
    if (!real) {
      const Line conj = conjugate_line(l);
      double best = std::numeric_limits<double>::infinity();
      for (const auto& other : s.records) {
        if (other.line.v.size() != n) continue;
        best = std::min(best, line_distance(conj, other.line));
      }
      if (!(best < tol.pairing)) {
        issues.push_back({idx, "no conjugate partner within " + sci(tol.pairing)});
      }
    }
  }
  if (total > bezout_bound_spheres(n)) {
    issues.push_back({-1, std::to_string(total) + " lines exceed the bound " +
                              std::to_string(bezout_bound_spheres(n))});
  }
  return issues;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Common tangent lines to spheres and quadrics", "tangentia"};
  app.require_subcommand(1);

  Common solve_opts;
  std::string solve_file;
  auto* solve = app.add_subcommand("solve", "Solve an arrangement of 2n-2 spheres by homotopy");
  solve->add_option("arrangement", solve_file, "Arrangement JSON")->required();
  solve_opts.attach(solve);

  Common fam_opts;
  std::string family_name;
  int fam_n = 4;
  double fam_a = 1.0;
  double fam_r = 0.0;
  double fam_r2 = 0.0;
  bool verify_homotopy = false;
  auto* family = app.add_subcommand("family", "Enumerate a closed-form family");
  family->add_option("name", family_name, "thm4, crosspolytope or perturbed")
      ->required()
      ->check(CLI::IsMember({"thm4", "crosspolytope", "perturbed"}));
  family->add_option("--n", fam_n, "Ambient dimension");
  family->add_option("--a", fam_a, "Axis offset (thm4 family) or perturbation (perturbed)");
  auto* r_opt = family->add_option("--r", fam_r, "Common radius");
  auto* r2_opt = family->add_option("--r2", fam_r2, "Squared radius");
  r_opt->excludes(r2_opt);
  family->add_flag("--verify-homotopy", verify_homotopy,
                   "Also solve numerically and report the largest matching distance");
  fam_opts.attach(family);

  Common region_opts;
  int region_n = 5;
  GridAxis a_axis{1.0, 3.0, 200};
  GridAxis r_axis{0.0, std::sqrt(3.0), 200};
  auto* region = app.add_subcommand("region", "Sample the reality region of the tetrahedron-plus-axes family");
  region->add_option("--n", region_n, "Ambient dimension (>= 4)");
  region->add_option("--a-min", a_axis.min);
  region->add_option("--a-max", a_axis.max);
  region->add_option("--a-steps", a_axis.steps)->check(CLI::PositiveNumber);
  region->add_option("--r-min", r_axis.min);
  region->add_option("--r-max", r_axis.max);
  region->add_option("--r-steps", r_axis.steps)->check(CLI::PositiveNumber);
  region_opts.attach(region, "csv");

  Common bound_opts;
  int bound_n = 3;
  auto* bound = app.add_subcommand("bound", "Print the tangent-line bounds for dimension n");
  bound->add_option("n", bound_n, "Ambient dimension (3..16)")->required();
  bound->add_option("--format", bound_opts.format)->check(CLI::IsMember({"text", "json"}));
  bound_opts.format = "text";

  Common verify_opts;
  std::string verify_arr, verify_sol;
  auto* verify = app.add_subcommand("verify", "Check a solutions file against its arrangement");
  verify->add_option("arrangement", verify_arr, "Arrangement JSON")->required();
  verify->add_option("solutions", verify_sol, "Solutions JSON")->required();
  verify->add_option("--tol-residual", verify_opts.tol_residual)->check(CLI::PositiveNumber);
  verify->add_option("--tol-reality", verify_opts.tol_reality)->check(CLI::PositiveNumber);
  verify->add_option("--tol-dedup", verify_opts.tol_dedup)->check(CLI::PositiveNumber);

  Common quad_opts;
  std::string quad_file;
  int quad_random_n = 0;
  auto* quadrics = app.add_subcommand("quadrics", "Common tangents to 2n-2 quadrics in P^n");
  quadrics->add_option("quadrics", quad_file, "Quadrics JSON");
  quadrics->add_option("--random", quad_random_n, "Use 2n-2 random real quadrics in P^n instead");
  quad_opts.attach(quadrics);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kMalformedInput;
  }

  try {
    if (solve->parsed()) {
      const SphereArrangement arr = io::arrangement_from_json(io::read_json_file(solve_file));
      const SolutionSet s = solve_arrangement(arr, solve_opts.config(), solve_opts.patch_spec());
      emit(solve_opts, solution_document(solve_opts, s, arr.dimension()),
           summary_line(arr.dimension(), s), out, err);
      return kOk;
    }
    if (family->parsed()) {
      const bool have_r = r_opt->count() > 0 || r2_opt->count() > 0;
      if (!have_r) throw InvalidArgument("family needs --r or --r2");
      const double r = r2_opt->count() > 0 ? std::sqrt(fam_r2) : fam_r;
      if (r2_opt->count() > 0 && !(fam_r2 > 0.0)) throw InvalidArgument("--r2 must be positive");
      SolutionSet s;
      SphereArrangement arr = crosspolytope_arrangement({3, 1.0, 1.0});
      bool spanning = false;
      if (family_name == "thm4") {
        const Thm4Params p{fam_n, fam_a, r};
        s = thm4_tangents(p, fam_opts.tol_reality);
        arr = thm4_arrangement(p);
        spanning = true;
      } else if (family_name == "crosspolytope") {
        s = crosspolytope_tangents(fam_n, r, fam_opts.tol_reality);
        arr = crosspolytope_arrangement({fam_n, r, 1.0});
      } else {
        const CrosspolytopeParams p{fam_n, r, fam_a};
        s = perturbed_crosspolytope_tangents(p, fam_opts.tol_reality);
        arr = crosspolytope_arrangement(p);
      }
      s.config = fam_opts.config();
      std::string summary = summary_line(fam_n, s);
      if (verify_homotopy) {
        const TrackerConfig cfg = fam_opts.config();
        // The crosspolytope centers lie in a hyperplane.
        const SolutionSet h = spanning ? solve_arrangement(arr, cfg, fam_opts.patch_spec())
                                       : solve_dependent_arrangement(arr, cfg);
        std::size_t isotropic = 0;
        for (const auto& rec : h.records) isotropic += rec.v_isotropic ? rec.multiplicity : 0;
        summary += "\nhomotopy total=" + std::to_string(h.total() - isotropic) +
                   " real=" + std::to_string(h.real_count()) +
                   " isotropic=" + std::to_string(isotropic) +
                   " max_match=" + sci(max_matching_distance(s, h));
      }
      emit(fam_opts, solution_document(fam_opts, s, fam_n), summary, out, err);
      return kOk;
    }
    if (region->parsed()) {
      const auto rows = region_sample(region_n, a_axis, r_axis);
      std::size_t all_real = 0;
      for (const auto& row : rows) all_real += row.all_real ? 1 : 0;
      const std::string doc = region_opts.format == "csv"
                                  ? io::region_to_csv(rows)
                                  : io::region_to_json(rows).dump(2) + "\n";
      emit(region_opts, doc,
           "n=" + std::to_string(region_n) + " points=" + std::to_string(rows.size()) +
               " all_real=" + std::to_string(all_real),
           out, err);
      return kOk;
    }
    if (bound->parsed()) {
      const auto s = bezout_bound_spheres(bound_n);
      const auto q = bezout_bound_quadrics(bound_n);
      const auto g = grassmannian_degree(bound_n);
      if (bound_opts.format == "json") {
        out << io::Json{{"n", bound_n}, {"spheres", s}, {"quadrics", q}, {"grassmannian", g}}.dump()
            << '\n';
      } else {
        out << "n=" << bound_n << " spheres=" << s << " quadrics=" << q << " grassmannian=" << g
            << '\n';
      }
      return kOk;
    }
    if (verify->parsed()) {
      const SphereArrangement arr = io::arrangement_from_json(io::read_json_file(verify_arr));
      const SolutionSet s = io::solutions_from_json(io::read_json_file(verify_sol));
      VerifyTolerances tol;
      tol.residual = verify_opts.tol_residual;
      tol.reality = verify_opts.tol_reality;
      tol.pairing = verify_opts.tol_dedup;
      const auto issues = verify_solutions(arr, s, tol);
      for (const auto& issue : issues) out << describe(issue) << '\n';
      if (!issues.empty()) {
        out << "verify: FAIL (" << issues.size() << " problems in " << s.records.size()
            << " records)\n";
        return kVerifyFailed;
      }
      out << "verify: ok (" << s.records.size() << " records, total " << s.total() << ")\n";
      return kOk;
    }
    if (quadrics->parsed()) {
      std::vector<ProjectiveQuadric> qs;
      if (quad_random_n > 0) {
        if (!quad_file.empty()) throw InvalidArgument("give either a quadrics file or --random");
        std::mt19937_64 rng(quad_opts.seed);
        std::normal_distribution<double> g(0.0, 1.0);
        const int size = quad_random_n + 1;
        for (std::size_t k = 0; k < SphereArrangement::expected_count(quad_random_n); ++k) {
          RMatrix m(size, size);
          for (int i = 0; i < size; ++i) {
            for (int j = 0; j < size; ++j) m(i, j) = g(rng);
          }
          qs.emplace_back(((m + m.transpose()) / 2.0).cast<Complex>());
        }
      } else {
        if (quad_file.empty()) throw InvalidArgument("quadrics needs a file or --random <n>");
        qs = io::quadrics_from_json(io::read_json_file(quad_file));
      }
      const QuadricSolutionSet s = solve_quadrics(qs, quad_opts.config());
      const int n = s.n;
      emit(quad_opts, io::quadric_solutions_to_json(s).dump(2) + "\n",
           "n=" + std::to_string(n) + " isolated=" + std::to_string(s.isolated_count()) +
               " excess=" + std::to_string(s.excess_paths) +
               " raw=" + std::to_string(s.raw_path_count) +
               " max=" + std::to_string(bezout_bound_quadrics(n)),
           out, err);
      return kOk;
    }
  } catch (const AffinelyDependentCenters& e) {
    err << "error: " << e.what() << '\n'
        << "hint: the centers do not affinely span R^n; use `tangentia family crosspolytope` or "
           "`tangentia family perturbed`, or perturb the centers\n";
    return kDegenerateConfiguration;
  } catch (const DiscriminantVanishes& e) {
    err << "error: " << e.what() << '\n';
    return kDiscriminant;
  } catch (const DegenerateRadius& e) {
    err << "error: " << e.what() << '\n';
    return kDiscriminant;
  } catch (const ZeroCoordinateRoot& e) {
    err << "error: " << e.what() << '\n';
    return kDiscriminant;
  } catch (const NonFiniteSolutionSet& e) {
    err << "error: " << e.what() << '\n';
    return kDegenerateConfiguration;
  } catch (const UnresolvedCluster& e) {
    err << "error: " << e.what() << "\nhint: adjust --tol-dedup\n";
    return kDegenerateConfiguration;
  } catch (const IsotropicDirection& e) {
    err << "error: " << e.what() << '\n';
    return kDegenerateConfiguration;
  } catch (const SingularBasis& e) {
    err << "error: " << e.what() << '\n';
    return kDegenerateConfiguration;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kMalformedInput;
  }
  return kMalformedInput;
}

}  // namespace tangentia::cli
