#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tangentia/core.hpp"
#include "tangentia/solver.hpp"

namespace tangentia::cli {

enum ExitCode : int {
  kOk = 0,
  kMalformedInput = 1,
  kDegenerateConfiguration = 2,
  kDiscriminant = 3,
  kVerifyFailed = 4,
};

// Runs one command line (without the program name). Output files go where
// --out points; everything else is written to out and err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct VerifyIssue {
  // Record index, or -1 for set-level problems.
  long index = -1;
  std::string message;
};

struct VerifyTolerances {
  double residual = kDefaultResidualTol;
  double reality = kDefaultRealityTol;
  double pairing = 1e-6;
};

// Recomputes residuals, moment orthogonality, reality flags and conjugate
// pairing of a stored solution set against its arrangement.
std::vector<VerifyIssue> verify_solutions(const SphereArrangement& arr, const SolutionSet& s,
                                          const VerifyTolerances& tol);

}  // namespace tangentia::cli
