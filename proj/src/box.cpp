#include "ldelta/box.hpp"

#include <algorithm>
#include <sstream>

namespace ldelta {

Box Box::cube(std::span<const double> center, double radius) {
  Box b;
  for (double c : center) {
    b.lower.push_back(c - radius);
    b.upper.push_back(c + radius);
  }
  return b;
}

bool Box::valid() const {
  if (lower.empty() || lower.size() != upper.size()) return false;
  for (std::size_t i = 0; i < lower.size(); ++i)
    if (!(lower[i] < upper[i])) return false;
  return true;
}

bool Box::contains(std::span<const double> x) const {
  if (x.size() != lower.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] < lower[i] || x[i] > upper[i]) return false;
  return true;
}

bool Box::encloses(const Box& other) const {
  if (other.dim() != dim()) return false;
  for (std::size_t i = 0; i < lower.size(); ++i)
    if (other.lower[i] < lower[i] || other.upper[i] > upper[i]) return false;
  return true;
}

bool Box::strictly_inside(const Box& outer) const {
  if (outer.dim() != dim()) return false;
  for (std::size_t i = 0; i < lower.size(); ++i)
    if (!(outer.lower[i] < lower[i] && upper[i] < outer.upper[i])) return false;
  return true;
}

double Box::volume() const {
  double v = 1.0;
  for (std::size_t i = 0; i < lower.size(); ++i) v *= upper[i] - lower[i];
  return v;
}

Box Box::hull(const Box& a, const Box& b) {
  Box h = a;
  for (std::size_t i = 0; i < h.lower.size(); ++i) {
    h.lower[i] = std::min(h.lower[i], b.lower[i]);
    h.upper[i] = std::max(h.upper[i], b.upper[i]);
  }
  return h;
}

std::string to_string(const Box& box) {
  std::ostringstream out;
  for (int i = 0; i < box.dim(); ++i) {
    if (i) out << " * ";
    out << '[' << box.lower[i] << ", " << box.upper[i] << ']';
  }
  return out.str();
}

}  // namespace ldelta
