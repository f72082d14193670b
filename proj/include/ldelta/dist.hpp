#pragma once

// Distributions in normal form and their pairing with test functions.
// Distribution values are unevaluated trees; all numerical work happens in
// `pair`, which integrates only over the test function's support box.

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ldelta/quad.hpp"
#include "ldelta/testfn.hpp"

namespace ldelta {

using HostFn = std::function<double(std::span<const double>)>;

/// A measurable subset of R^dim given by its characteristic function.
struct PredVal {
  int dim = 1;
  std::function<bool(std::span<const double>)> test;
  std::string description;
  /// Where the boundary crosses each axis, when known; pairing splits its
  /// integrals there.
  Breakpoints breaks;
};

PredVal negate(const PredVal& p);

struct DistExpr;
using DistPtr = std::shared_ptr<const DistExpr>;

struct DistExpr {
  enum class Kind { Dirac, Lift, Ind, Sum, Scale, Deriv };

  Kind kind;
  int dim;
  std::vector<double> point;  // Dirac
  HostFn fn;                  // Lift, Ind
  std::string fn_description; // Lift, Ind
  PredVal pred;               // Ind
  double coeff = 0;           // Scale
  int index = 0;              // Deriv, 1-based
  DistPtr left, right;        // Scale/Deriv: left; Sum: both
};

DistPtr dirac(std::vector<double> point);
DistPtr lift_dist(HostFn f, int dim, std::string description = "<function>");
/// Throws DimensionMismatch when b.dim != dim.
DistPtr indicator(PredVal b, HostFn f, int dim, std::string description = "<function>");
/// Throws DimensionMismatch on unequal dimensions.
DistPtr add(DistPtr t, DistPtr s);
DistPtr scale(double alpha, DistPtr t);
/// Throws IndexOutOfRange unless 1 <= i <= t->dim.
DistPtr deriv(DistPtr t, int i);

struct PairResult {
  double value = 0;
  /// Sum of the quadrature error estimates of every integral involved,
  /// weighted by the scalar coefficients above them.
  double error_estimate = 0;
  long evals = 0;
};

/// <T, phi>.  Throws DimensionMismatch, and NonConvergence naming the
/// subterm whose integral failed.
PairResult pair_detailed(const DistExpr& t, const TestFnPtr& phi, const QuadConfig& cfg = {});
double pair(const DistExpr& t, const TestFnPtr& phi, const QuadConfig& cfg = {});
inline double pair(const DistPtr& t, const TestFnPtr& phi, const QuadConfig& cfg = {}) {
  return pair(*t, phi, cfg);
}

std::string describe(const DistExpr& t);

}  // namespace ldelta
