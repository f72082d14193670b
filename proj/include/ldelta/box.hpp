#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace ldelta {

/// Axis-aligned box [lower_0, upper_0] x ... x [lower_{n-1}, upper_{n-1}].
struct Box {
  std::vector<double> lower;
  std::vector<double> upper;

  Box() = default;
  Box(std::vector<double> lo, std::vector<double> hi)
      : lower(std::move(lo)), upper(std::move(hi)) {}

  static Box interval(double a, double b) { return Box({a}, {b}); }
  static Box cube(std::span<const double> center, double radius);

  int dim() const { return static_cast<int>(lower.size()); }

  /// lower[i] < upper[i] for every axis and both vectors have equal length.
  bool valid() const;
  bool contains(std::span<const double> x) const;
  /// Closed containment of `other` in this box.
  bool encloses(const Box& other) const;
  /// `this` strictly inside `outer` on every axis.
  bool strictly_inside(const Box& outer) const;
  double volume() const;

  /// Smallest box containing both.
  static Box hull(const Box& a, const Box& b);

  bool operator==(const Box&) const = default;
};

std::string to_string(const Box& box);

}  // namespace ldelta
