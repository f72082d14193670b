#pragma once

// The standard environment and helpers to check and run whole programs.
//
//   der        : Dist(R^1) -> R -> R+ -> R
//   gradDesc   : Dist(R^1) -> R -> R+ -> N -> R
//   gradDescLr : Dist(R^1) -> R -> R+ -> R -> N -> R
//   integral   : Dist(R^2) -> R^2 -> R^2 -> R
//   charFunc   : R -> Dist(R^2)
//   I          : R -> R
//
// der, gradDesc, gradDescLr and I are written in the surface language;
// integral and charFunc are host functions, the latter folding over the
// scene's primitives.

#include <string>
#include <string_view>
#include <vector>

#include "ldelta/eval.hpp"
#include "ldelta/scene.hpp"
#include "ldelta/typecheck.hpp"

namespace ldelta {

struct Prelude {
  Ctx ctx;
  Env env;
};

Prelude make_prelude(const Scene& scene = {});

/// The surface-language part of the prelude for a given pixel.
std::string prelude_source(const Box& pixel);

/// <T, plateau(K1, K2)> with K1 = [x1, x2] * [y1, y2] and K2 its expansion
/// by half the width on each side.
double pixel_integral(const DistExpr& t, double x1, double y1, double x2, double y2,
                      const QuadConfig& cfg);

struct CheckedProgram {
  SourceFile source;
  std::vector<TypedDefinition> definitions;
  /// Index of the main definition.
  std::size_t main = 0;
};

/// Parses and typechecks against the prelude context.
CheckedProgram check_source(std::string_view text, const Prelude& prelude);

struct RunResult {
  ValuePtr value;
  TypePtr type;
};

/// Evaluates every definition and returns the main one.
RunResult run_program(const CheckedProgram& prog, const Prelude& prelude, const QuadConfig& cfg);

}  // namespace ldelta
