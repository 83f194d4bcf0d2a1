#ifndef SPINPHOTON_OPTIMIZE_HPP
#define SPINPHOTON_OPTIMIZE_HPP

#include <functional>
#include <span>
#include <vector>

namespace spinphoton {

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Derivative-free minimization with the Nelder-Mead simplex (GSL nmsimplex2).
/// Stops when the simplex characteristic size drops below `size_tolerance`
/// or after `max_iterations`.
SimplexResult nelder_mead_minimize(const std::function<double(std::span<const double>)>& f,
                                   std::vector<double> start, std::vector<double> step,
                                   int max_iterations, double size_tolerance);

}  // namespace spinphoton

#endif  // SPINPHOTON_OPTIMIZE_HPP
