#pragma once

// Test functions: bumps, plateaus, their linear combinations and partial
// derivatives.  Every node records a box enclosing its support.
// Derivatives are exact: values and partials come from truncated Taylor
// arithmetic through the closed-form definitions.

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ldelta/box.hpp"
#include "ldelta/quad.hpp"

namespace ldelta {

struct TestFn;
using TestFnPtr = std::shared_ptr<const TestFn>;

struct TestFn {
  enum class Kind { Bump, Plateau, Scale, Sum, Deriv };

  Kind kind;
  int dim;
  Box support;

  std::vector<double> center;  // Bump
  double radius = 0;           // Bump
  Box inner, outer;            // Plateau
  double coeff = 0;            // Scale
  int index = 0;               // Deriv, 1-based axis
  TestFnPtr left, right;       // Scale/Deriv: left; Sum: both
};

/// exp(-1 / (1 - ((x - c) / r)^2)) inside (c - r, c + r), 0 elsewhere.
double eval_bump_1d(double c, double r, double x);

/// g(t) / (g(t) + g(1 - t)) with g(t) = exp(-1/t) for t > 0, else 0.
double smoothstep(double t);

TestFnPtr bump(std::vector<double> center, double radius);
/// Throws std::invalid_argument unless inner is strictly inside outer.
TestFnPtr plateau(Box inner, Box outer);
TestFnPtr scale(double coeff, TestFnPtr f);
TestFnPtr sum(TestFnPtr f, TestFnPtr g);
/// Throws IndexOutOfRange unless 1 <= i <= f->dim.
TestFnPtr derivative(TestFnPtr f, int i);

/// Scale(1/V, Bump(c, r)) with V the bump's volume, so it integrates to 1.
TestFnPtr normalized_bump(std::vector<double> center, double radius);
/// Integral of the unit bump exp(-1/(1-x^2)) over [-1, 1], by quadrature.
double unit_bump_volume();

/// Throws DimensionMismatch when x.size() != f.dim.
double evaluate(const TestFn& f, std::span<const double> x);
inline double evaluate(const TestFnPtr& f, std::span<const double> x) { return evaluate(*f, x); }

/// Truncated multivariate Taylor expansion at `point`.
class Jet {
 public:
  Jet(std::vector<double> point, int order);

  int dim() const { return static_cast<int>(point_.size()); }
  int order() const { return order_; }
  const std::vector<double>& point() const { return point_; }

  /// Taylor coefficient of the monomial with exponents `alpha`, i.e.
  /// (d^alpha f)(point) / alpha!.  Zero when |alpha| > order.
  double coefficient(std::span<const int> alpha) const;
  /// Partial derivative d^alpha f at the point.
  double derivative(std::span<const int> alpha) const;
  double value() const;

  double& at(std::span<const int> alpha);

 private:
  std::vector<double> point_;
  int order_;
  std::vector<double> coeffs_;  // dense, (order+1)^dim entries
  std::size_t offset(std::span<const int> alpha) const;
};

/// Throws OrderLimitExceeded when `order` plus the number of nested Deriv
/// nodes exceeds max_order().
Jet eval_jet(const TestFn& f, std::span<const double> x, int order);

/// Derivative order cap: 8, or LDELTA_MAX_ORDER when set to a positive integer.
int max_order();

/// Number of Deriv nodes on the deepest path.
int deriv_depth(const TestFn& f);

std::string describe(const TestFn& f);

}  // namespace ldelta
