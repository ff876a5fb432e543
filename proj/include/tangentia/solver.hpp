#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tangentia/core.hpp"
#include "tangentia/formulation.hpp"
#include "tangentia/poly.hpp"

namespace tangentia {

struct TrackerConfig {
  double step_init = 0.02;
  double step_min = 1e-13;
  double step_max = 0.1;
  // Relative Newton step size accepted by the corrector while tracking.
  double newton_tol = 1e-9;
  int newton_max_iters = 3;
  // A path that stalls within this distance of t = 1 is finished by Newton
  // on the target system instead of being declared diverged.
  double endgame_radius = 1e-3;
  // Projective distance below which endpoints are merged.
  double dedup_tol = 1e-6;
  // Merge radius for endpoints whose Jacobian is numerically singular.
  // Rounding spreads an m-fold root over a ball of radius ~eps^(1/m), so
  // clusters of multiple roots need a looser tolerance than regular ones.
  double singular_dedup_tol = 1e-3;
  double reality_tol = kDefaultRealityTol;
  double residual_tol = kDefaultResidualTol;
  std::uint64_t seed = 20021;
  // Worker threads for path tracking; 0 selects the hardware concurrency.
  unsigned threads = 0;

  // Throws InvalidArgument when the step or tolerance invariants fail.
  void validate() const;
};

enum class PathStatus { converged, diverged, truncated, singular_endpoint };

std::string to_string(PathStatus s);

struct PathResult {
  CVector endpoint;
  PathStatus status = PathStatus::truncated;
  // Max over equations of |f_i(x)| / sum |c| m^deg with m = max(1, |x|_inf).
  double final_residual = 0.0;
  double condition_estimate = 0.0;
  std::size_t steps = 0;
};

struct StatusCounts {
  std::size_t converged = 0;
  std::size_t diverged = 0;
  std::size_t truncated = 0;
  std::size_t singular = 0;

  std::size_t total() const { return converged + diverged + truncated + singular; }
};

StatusCounts count_statuses(const std::vector<PathResult>& paths);

struct StartSystem {
  PolySystem system;
  std::vector<CVector> points;
};

// {x_i^d_i - b_i} with random unit-modulus b_i and all prod d_i roots.
// Throws InvalidArgument for non-square systems or zero polynomials.
StartSystem total_degree_start(const PolySystem& target, std::uint64_t seed);

// Tracks H(x, t) = (1 - t) g G(x) + t F(x) from every start root. Each path
// reports a status; failures are never thrown. Deterministic for a seed.
std::vector<PathResult> track_all(const PolySystem& target, const TrackerConfig& cfg);

struct RefineResult {
  CVector x;
  double residual = 0.0;
  int iterations = 0;
  bool singular = false;
};

// Newton on the square system until the relative residual drops below tol.
// Flags singular roots (linear convergence or a numerically singular
// Jacobian); a singular Jacobian at x returns x unchanged.
RefineResult refine(const CVector& x, const PolySystem& s, double tol = 1e-12, int max_iters = 50);

struct PatchSpec {
  bool random = true;
  std::size_t index = 0;
};

struct SolutionSet {
  std::vector<SolutionRecord> records;
  // Bezout number of the tracked system; 0 for closed-form enumerations.
  std::size_t raw_path_count = 0;
  CVector patch;
  TrackerConfig config;
  StatusCounts statuses;
  // Singular endpoints that no other path joined. A multiple root attracts
  // several paths; a lone singular endpoint points at a solution curve.
  std::size_t unclustered_singular = 0;

  // Counts with multiplicity.
  std::size_t total() const;
  std::size_t real_count() const;
};

// Clusters endpoints, back-substitutes the moment point and classifies
// reality. Throws UnresolvedCluster when clusters chain at the tolerance.
SolutionSet deduplicate_and_classify(const std::vector<PathResult>& paths, const ReducedSystem& red,
                                     const AffinePatch& patch, const TrackerConfig& cfg);

// Full pipeline for spanning centers. Throws AffinelyDependentCenters, or
// NonFiniteSolutionSet when too many paths end on a positive-dimensional
// solution set.
SolutionSet solve_arrangement(const SphereArrangement& arr, const TrackerConfig& cfg,
                              PatchSpec patch = {});

// Tracks the hyperplane formulation for centers spanning an affine
// hyperplane (3 * 2^n paths). Spanning or lower-dimensional centers are
// rejected as in build_dependent_system.
SolutionSet solve_dependent_arrangement(const SphereArrangement& arr, const TrackerConfig& cfg);

// Lines in P^n as normalized Plucker vectors.
struct ProjectiveLineRecord {
  CVector plucker;
  double residual = 0.0;
  bool is_real = false;
  int multiplicity = 1;
  bool at_infinity = false;
};

struct QuadricSolutionSet {
  int n = 0;
  // Isolated tangent lines.
  std::vector<ProjectiveLineRecord> records;
  // Distinct endpoints on lines at infinity or on singular points.
  std::vector<ProjectiveLineRecord> excess;
  std::size_t raw_path_count = 0;
  std::size_t excess_paths = 0;
  // Endpoints that solve the randomized system but not every original equation.
  std::size_t extraneous_paths = 0;
  StatusCounts statuses;

  std::size_t isolated_count() const;
};

// Common tangent lines to 2n-2 quadrics in P^n, n = 3 or 4.
QuadricSolutionSet solve_quadrics(const std::vector<ProjectiveQuadric>& quadrics,
                                  const TrackerConfig& cfg);

}  // namespace tangentia
