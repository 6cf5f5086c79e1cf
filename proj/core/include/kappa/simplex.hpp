#pragma once

// Derivative-free local minimization: adaptive Nelder-Mead plus a
// coordinate-wise golden-section polish.

#include <functional>
#include <span>
#include <vector>

namespace kappa {

using Objective = std::function<double(std::span<const double>)>;

struct SimplexOptions {
  int max_iterations = 5000;
  double f_tolerance = 1e-13;
  double x_tolerance = 1e-10;
  double initial_step = 0.5;
  /// Stop as soon as the best value drops below this.
  double target = -1e300;
};

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
};

/// Nelder-Mead with dimension-adaptive coefficients (Gao & Han 2012). The
/// initial simplex is x0 plus initial_step along each coordinate.
SimplexResult nelder_mead(const Objective& f, std::vector<double> x0,
                          const SimplexOptions& options = {});

/// Repeated Nelder-Mead runs, each restarted from the previous optimum with a
/// fresh simplex, until a run improves by less than f_tolerance or
/// `max_rounds` runs have been made.
SimplexResult nelder_mead_restarted(const Objective& f, std::vector<double> x0,
                                    const SimplexOptions& options, int max_rounds);

/// Golden-section line search along each coordinate in turn over
/// [x_k - radius, x_k + radius]; moves are accepted only when they lower f.
/// Repeats up to `sweeps` times while a sweep improves by more than 1e-15.
SimplexResult golden_section_polish(const Objective& f, SimplexResult start, double radius,
                                    int sweeps = 3);

}  // namespace kappa
