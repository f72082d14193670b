#pragma once

// Scenes for the pixel-integral example: a pixel box and a list of
// primitives, each an indicator region with a coefficient function.
// Geometry may depend affinely on the scene parameter phi.  The text format
// is described in docs/scene-format.

#include <string>
#include <string_view>
#include <vector>

#include "ldelta/box.hpp"
#include "ldelta/dist.hpp"

namespace ldelta {

/// a + b * phi
struct Affine {
  double a = 0, b = 0;
  double at(double phi) const { return a + b * phi; }
};

struct Primitive {
  enum class Kind { HalfPlane, Triangle };
  enum class Coef { Constant, X, Y, XY, Radial, PhiX };

  Kind kind;
  /// HalfPlane: nx, ny, c (the region nx*x + ny*y < c).
  /// Triangle: x1, y1, x2, y2, x3, y3.
  std::vector<Affine> geometry;
  Coef coef = Coef::Constant;
  Affine constant{1, 0};
};

struct Scene {
  Box pixel{{0, 0}, {1, 1}};
  std::vector<Primitive> primitives;
};

/// Throws std::invalid_argument with a line number on malformed input.
Scene parse_scene(std::string_view text);
Scene load_scene(const std::string& path);

/// Sum over primitives of the indicator of (region and pixel) times the
/// coefficient, at parameter phi.  An empty scene gives the zero distribution.
DistPtr char_func(const Scene& scene, double phi);

}  // namespace ldelta
