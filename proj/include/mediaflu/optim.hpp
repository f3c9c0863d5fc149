#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace mediaflu {

using Objective = std::function<double(std::span<const double>)>;

struct FiniteDiffGradient {
  std::vector<double> g;
  // One-sided differences were used for components closer than h to a bound.
  std::vector<char> one_sided;
  bool any_one_sided = false;
  int evaluations = 0;
};

// Central differences (f(x + h e_i) - f(x - h e_i)) / 2h. When bounds are
// given and x_i is within h_i of one, a one-sided difference pointing into
// the box is used instead and flagged. f_x is f(x) if already known.
FiniteDiffGradient finite_diff_gradient(const Objective& f,
                                        std::span<const double> x,
                                        std::span<const double> h,
                                        std::span<const double> lo = {},
                                        std::span<const double> hi = {},
                                        const double* f_x = nullptr);

struct BoxOptions {
  int max_iterations = 500;
  int memory = 10;           // curvature pairs kept
  double pgtol = 1e-8;       // stop when |proj grad|_inf < pgtol (1 + |f|)
  double ftol = 1e-10;       // stop when the relative decrease drops below
  double armijo = 1e-4;      // sufficient-decrease constant
  int max_backtracks = 40;
  std::vector<double> fd_step;  // empty: 1e-5 (hi - lo) per component
};

enum class BoxStatus {
  ProjectedGradient,  // converged: projected gradient below tolerance
  RelativeReduction,  // converged: progress stalled at the ftol level
  IterationLimit,
  LineSearchFailed,
};

const char* to_string(BoxStatus s);

struct BoxResult {
  std::vector<double> x;
  double f = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  BoxStatus status = BoxStatus::IterationLimit;
  double projected_gradient = 0.0;  // sup norm at x
  std::vector<double> trace;        // f after every accepted iteration
};

// Projected limited-memory BFGS on the box [lo, hi]. The gradient comes
// from finite differences. Iterates never leave the box.
BoxResult minimize_box(const Objective& f, std::span<const double> x0,
                       std::span<const double> lo, std::span<const double> hi,
                       const BoxOptions& opts = {});

}  // namespace mediaflu
