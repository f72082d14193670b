#include "ldelta/scene.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace ldelta {

namespace {

[[noreturn]] void fail(int line, const std::string& msg) {
  throw std::invalid_argument("scene line " + std::to_string(line) + ": " + msg);
}

bool read_number(std::string_view s, std::size_t& i, double& out) {
  auto [p, ec] = std::from_chars(s.data() + i, s.data() + s.size(), out);
  if (ec != std::errc()) return false;
  i = static_cast<std::size_t>(p - s.data());
  return true;
}

bool read_phi(std::string_view s, std::size_t& i) {
  if (s.substr(i, 3) != "phi") return false;
  i += 3;
  return true;
}

/// term {(+|-) term} where term is NUM, phi, NUM*phi or phi*NUM.
Affine parse_affine(std::string_view s, int line) {
  Affine out;
  std::size_t i = 0;
  bool first = true;
  while (i < s.size() || first) {
    double sign = 1;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    } else if (!first) {
      fail(line, "bad field '" + std::string(s) + "'");
    }
    first = false;
    double num = 1;
    bool has_phi = false;
    if (read_phi(s, i)) {
      has_phi = true;
      if (i < s.size() && s[i] == '*') {
        ++i;
        if (!read_number(s, i, num)) fail(line, "bad field '" + std::string(s) + "'");
      }
    } else if (read_number(s, i, num)) {
      if (i < s.size() && s[i] == '*') {
        ++i;
        if (!read_phi(s, i)) fail(line, "bad field '" + std::string(s) + "'");
        has_phi = true;
      }
    } else {
      fail(line, "bad field '" + std::string(s) + "'");
    }
    (has_phi ? out.b : out.a) += sign * num;
  }
  if (!std::isfinite(out.a) || !std::isfinite(out.b)) fail(line, "non-finite field");
  return out;
}

void parse_coef(const std::string& word, Primitive& p, int line) {
  static const std::map<std::string, Primitive::Coef> named = {
      {"x", Primitive::Coef::X},           {"y", Primitive::Coef::Y},
      {"xy", Primitive::Coef::XY},         {"radial", Primitive::Coef::Radial},
      {"phix", Primitive::Coef::PhiX}};
  if (auto it = named.find(word); it != named.end()) {
    p.coef = it->second;
    return;
  }
  p.coef = Primitive::Coef::Constant;
  p.constant = parse_affine(word, line);
}

double coefficient(const Primitive& p, double phi, double x, double y) {
  switch (p.coef) {
    case Primitive::Coef::Constant: return p.constant.at(phi);
    case Primitive::Coef::X: return x;
    case Primitive::Coef::Y: return y;
    case Primitive::Coef::XY: return x * y;
    case Primitive::Coef::Radial: return x * x + y * y;
    case Primitive::Coef::PhiX: return phi * x;
  }
  return 0;
}

const char* coef_name(Primitive::Coef c) {
  switch (c) {
    case Primitive::Coef::Constant: return "const";
    case Primitive::Coef::X: return "x";
    case Primitive::Coef::Y: return "y";
    case Primitive::Coef::XY: return "xy";
    case Primitive::Coef::Radial: return "radial";
    case Primitive::Coef::PhiX: return "phix";
  }
  return "?";
}

/// The line a*x + b*y = c, clipped against the pixel, contributes its
/// crossings of the pixel's horizontal edges on axis 0 and its height at
/// the fixed x on axis 1.
struct Line {
  double a, b, c;
};

Breakpoints line_breaks(const Box& pixel, std::vector<Line> lines, std::vector<double> xs) {
  return [pixel, lines = std::move(lines), xs = std::move(xs)](
             int axis, std::span<const double> fixed, std::vector<double>& out) {
    out.push_back(pixel.lower[axis]);
    out.push_back(pixel.upper[axis]);
    if (axis == 0) {
      out.insert(out.end(), xs.begin(), xs.end());
      for (const Line& l : lines) {
        if (l.a == 0) continue;
        out.push_back((l.c - l.b * pixel.lower[1]) / l.a);
        out.push_back((l.c - l.b * pixel.upper[1]) / l.a);
      }
    } else {
      for (const Line& l : lines)
        if (l.b != 0) out.push_back((l.c - l.a * fixed[0]) / l.b);
    }
  };
}

Line through(double px, double py, double qx, double qy) {
  return {qy - py, px - qx, (qy - py) * px + (px - qx) * py};
}

}  // namespace

Scene parse_scene(std::string_view text) {
  Scene scene;
  bool have_pixel = false;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream words(raw);
    std::vector<std::string> w;
    for (std::string s; words >> s;) w.push_back(s);
    if (w.empty()) continue;
    const std::string& kind = w[0];
    std::size_t nargs = w.size() - 1;
    if (kind == "pixel") {
      if (nargs != 4) fail(line, "pixel takes 4 numbers");
      std::vector<double> v;
      for (std::size_t k = 1; k <= 4; ++k) {
        Affine a = parse_affine(w[k], line);
        if (a.b != 0) fail(line, "pixel cannot depend on phi");
        v.push_back(a.a);
      }
      scene.pixel = Box({v[0], v[1]}, {v[2], v[3]});
      if (!scene.pixel.valid()) fail(line, "pixel box must have x1 < x2 and y1 < y2");
      have_pixel = true;
    } else if (kind == "halfplane" || kind == "triangle") {
      Primitive p;
      p.kind = kind == "halfplane" ? Primitive::Kind::HalfPlane : Primitive::Kind::Triangle;
      std::size_t n = p.kind == Primitive::Kind::HalfPlane ? 3 : 6;
      if (nargs != n && nargs != n + 1)
        fail(line, kind + " takes " + std::to_string(n) + " fields and an optional coefficient");
      for (std::size_t k = 1; k <= n; ++k) p.geometry.push_back(parse_affine(w[k], line));
      if (nargs == n + 1) parse_coef(w[n + 1], p, line);
      scene.primitives.push_back(std::move(p));
    } else {
      fail(line, "unknown entry '" + kind + "'");
    }
  }
  if (!have_pixel && scene.primitives.empty()) fail(line, "empty scene");
  return scene;
}

Scene load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open scene file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scene(buf.str());
}

DistPtr char_func(const Scene& scene, double phi) {
  const Box pixel = scene.pixel;
  DistPtr total;
  for (const Primitive& p : scene.primitives) {
    std::vector<double> g;
    for (const Affine& a : p.geometry) g.push_back(a.at(phi));
    std::function<bool(std::span<const double>)> region;
    Breakpoints breaks;
    std::ostringstream desc;
    desc.precision(12);
    if (p.kind == Primitive::Kind::HalfPlane) {
      region = [pixel, g](std::span<const double> x) {
        return pixel.contains(x) && g[0] * x[0] + g[1] * x[1] < g[2];
      };
      breaks = line_breaks(pixel, {{g[0], g[1], g[2]}}, {});
      desc << "halfplane " << g[0] << "*x + " << g[1] << "*y < " << g[2];
    } else {
      region = [pixel, g](std::span<const double> x) {
        if (!pixel.contains(x)) return false;
        auto edge = [&](int i, int j) {
          return (g[2 * j] - g[2 * i]) * (x[1] - g[2 * i + 1]) -
                 (g[2 * j + 1] - g[2 * i + 1]) * (x[0] - g[2 * i]);
        };
        double a = edge(0, 1), b = edge(1, 2), c = edge(2, 0);
        return (a > 0 && b > 0 && c > 0) || (a < 0 && b < 0 && c < 0);
      };
      breaks = line_breaks(pixel,
                           {through(g[0], g[1], g[2], g[3]), through(g[2], g[3], g[4], g[5]),
                            through(g[4], g[5], g[0], g[1])},
                           {g[0], g[2], g[4]});
      desc << "triangle (" << g[0] << ", " << g[1] << ") (" << g[2] << ", " << g[3] << ") ("
           << g[4] << ", " << g[5] << ")";
    }
    HostFn f = [p, phi](std::span<const double> x) { return coefficient(p, phi, x[0], x[1]); };
    std::string fdesc = p.coef == Primitive::Coef::Constant
                            ? [&] {
                                std::ostringstream o;
                                o.precision(12);
                                o << p.constant.at(phi);
                                return o.str();
                              }()
                            : std::string(coef_name(p.coef));
    DistPtr d = indicator(PredVal{2, region, desc.str(), breaks}, f, 2, fdesc);
    total = total ? add(total, d) : d;
  }
  return total ? total : scale(0.0, dirac({0.0, 0.0}));
}

}  // namespace ldelta
