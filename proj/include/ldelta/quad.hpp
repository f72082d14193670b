#pragma once

// Deterministic adaptive quadrature on intervals and boxes of dimension 1-3.
//
// 1D: adaptive bisection with a 15-point Gauss-Kronrod pair; each panel's
// error is |K15 - G7| and the panel with the largest error is split next.
// Boxes: by default the integral is iterated (an adaptive 1D integral over
// the first axis of adaptive integrals over the remaining axes); tensor
// Gauss-Kronrod box bisection is available as an alternative.
//
// Integrands must be pure: the result never depends on evaluation order.

#include <functional>
#include <span>
#include <vector>

#include "ldelta/box.hpp"

namespace ldelta {

struct QuadConfig {
  enum class BoxMode { Iterated, Bisection };

  double abs_tol = 1e-8;
  double rel_tol = 1e-8;
  /// Bisection depth limit for 1D integrals and for each axis of an
  /// iterated integral.
  int max_depth = 40;
  /// Depth limit per axis in bisection mode.
  int max_depth_box = 24;
  /// Evaluation budget of a single adaptive 1D integration (in iterated mode
  /// each inner integral gets its own budget) or of one box bisection run.
  long max_evals = 5'000'000;
  BoxMode box_mode = BoxMode::Iterated;

  /// Throws std::invalid_argument unless every field is positive.
  void validate() const;
};

struct QuadResult {
  double value = 0;
  double error_estimate = 0;
  long evals = 0;
};

using Integrand1D = std::function<double(double)>;
using IntegrandND = std::function<double(std::span<const double>)>;

/// Throws NonConvergence when the depth or evaluation limits are reached
/// before max(abs_tol, rel_tol * |value|) is met.
QuadResult integrate_1d(const Integrand1D& f, double a, double b, const QuadConfig& cfg = {});

/// Points where an integrand may jump or kink: appends to `out` coordinates
/// on `axis` given the coordinates of the earlier axes in `fixed`.
using Breakpoints =
    std::function<void(int axis, std::span<const double> fixed, std::vector<double>& out)>;

/// Throws UnsupportedDimension outside 1..3 and NonConvergence as above.
/// Iterated integrals are split at `breaks`; bisection ignores them.
QuadResult integrate_box(const IntegrandND& f, const Box& box, const QuadConfig& cfg = {},
                         const Breakpoints& breaks = {});

}  // namespace ldelta
