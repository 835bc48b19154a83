#pragma once

#include <functional>
#include <vector>

namespace strayfield {

struct NelderMeadOptions {
  int max_iterations = 20000;
  double f_tolerance = 1e-15;     // spread of simplex values
  double x_tolerance = 1e-12;     // simplex diameter
  double initial_step = 0.35;
};

struct NelderMeadResult {
  std::vector<double> x;
  double fmin = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Downhill simplex with the dimension-adaptive coefficients of Gao & Han.
// Deterministic: the result depends only on the start point and options.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& start, const NelderMeadOptions& options);

}  // namespace strayfield
