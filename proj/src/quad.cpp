#include "ldelta/quad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

#include "ldelta/error.hpp"

namespace ldelta {

void QuadConfig::validate() const {
  if (!(abs_tol > 0) || !(rel_tol > 0) || max_depth <= 0 || max_depth_box <= 0 ||
      max_evals <= 0)
    throw std::invalid_argument("quadrature settings must be strictly positive");
}

namespace {

// Kronrod abscissae on [0, 1] of the symmetric rule on [-1, 1]; odd entries
// (1, 3, 5) and the center are shared with the 7-point Gauss rule.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for kXgk[1], kXgk[3], kXgk[5], kXgk[7].
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

/// The 15 nodes of [-1, 1] in increasing order with Kronrod and Gauss
/// weights (Gauss weight 0 off the Gauss nodes).
struct Node {
  double x, wk, wg;
};

const std::array<Node, 15>& nodes() {
  static const std::array<Node, 15> table = [] {
    std::array<Node, 15> t{};
    for (int i = 0; i < 7; ++i) {
      double wg = (i % 2 == 1) ? kWg[i / 2] : 0.0;
      t[i] = {-kXgk[i], kWgk[i], wg};
      t[14 - i] = {kXgk[i], kWgk[i], wg};
    }
    t[7] = {0.0, kWgk[7], kWg[3]};
    return t;
  }();
  return table;
}

struct PanelEstimate {
  double value = 0;
  double error = 0;
  long own_evals = 0;
  long evals = 0;
};

struct Panel {
  double a, b;
  PanelEstimate est;
  int depth;
};

struct WorseFirst {
  bool operator()(const Panel& p, const Panel& q) const {
    // priority_queue pops the "largest"; larger error wins, then smaller a.
    if (p.est.error != q.est.error) return p.est.error < q.est.error;
    return p.a > q.a;
  }
};

template <class Rule>
QuadResult adaptive(const Rule& rule, double a, double b, double abs_tol, double rel_tol,
                    int max_depth, long max_evals) {
  std::priority_queue<Panel, std::vector<Panel>, WorseFirst> queue;
  std::vector<Panel> frozen;
  long own = 0, evals = 0;
  auto add = [&](const Panel& p) {
    if (!std::isfinite(p.est.value) || !std::isfinite(p.est.error))
      throw NonConvergence(p.est.value, INFINITY, "integrand is not finite");
    own += p.est.own_evals;
    evals += p.est.evals;
  };
  Panel root{a, b, rule(a, b), 0};
  add(root);
  double value = root.est.value, error = root.est.error;
  queue.push(root);

  auto totals = [&]() {
    // Recomputed from scratch so the reported numbers do not carry the
    // rounding of the running sums.
    std::vector<Panel> all = frozen;
    auto copy = queue;
    while (!copy.empty()) {
      all.push_back(copy.top());
      copy.pop();
    }
    std::sort(all.begin(), all.end(), [](const Panel& p, const Panel& q) { return p.a < q.a; });
    QuadResult r;
    for (const auto& p : all) {
      r.value += p.est.value;
      r.error_estimate += p.est.error;
    }
    r.evals = evals;
    return r;
  };

  for (;;) {
    double tol = std::max(abs_tol, rel_tol * std::fabs(value));
    if (error <= tol) {
      QuadResult r = totals();
      if (r.error_estimate <= std::max(abs_tol, rel_tol * std::fabs(r.value))) return r;
      value = r.value;
      error = r.error_estimate;
    }
    if (queue.empty() || own >= max_evals) {
      QuadResult r = totals();
      throw NonConvergence(r.value, r.error_estimate,
                           queue.empty() ? "depth limit reached" : "evaluation limit reached");
    }
    Panel p = queue.top();
    queue.pop();
    if (p.depth >= max_depth) {
      frozen.push_back(p);
      continue;
    }
    double mid = 0.5 * (p.a + p.b);
    Panel l{p.a, mid, rule(p.a, mid), p.depth + 1};
    Panel r{mid, p.b, rule(mid, p.b), p.depth + 1};
    add(l);
    add(r);
    value += l.est.value + r.est.value - p.est.value;
    error += l.est.error + r.est.error - p.est.error;
    queue.push(l);
    queue.push(r);
  }
}

// A jump inside the node-free gap at either end of a panel is invisible to
// both rules.  Each panel therefore also samples just inside its endpoints
// and, when the sample jumps away from the nearest node, charges the gap
// width times the jump.
constexpr double kProbe = 1e-10;

/// Probe abscissa at the lower (side -1) or upper (side 1) end of [c - h, c + h].
double probe_at(double c, double h, int side) { return c + side * h * (1 - kProbe); }

/// y[0] and y[16] are the endpoint probes, y[1..15] the nodes.
PanelEstimate combine(const std::array<double, 17>& y, double h, long evals) {
  double k = 0, g = 0;
  for (int i = 0; i < 15; ++i) {
    k += nodes()[i].wk * y[i + 1];
    g += nodes()[i].wg * y[i + 1];
  }
  // For smooth integrands the probe-to-node change is about a fifth of the
  // change between the two outer nodes; anything well beyond that is a jump.
  auto jump = [](double probe, double n1, double n2) {
    double d = std::fabs(probe - n1);
    return d > 2 * std::fabs(n1 - n2) ? d : 0.0;
  };
  double gap = (1 - kXgk[0]) * h;
  double err = std::fabs(k - g) * h + gap * (jump(y[0], y[1], y[2]) + jump(y[16], y[15], y[14]));
  return {k * h, err, 17, evals};
}

PanelEstimate gk15(const Integrand1D& f, double a, double b) {
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  std::array<double, 17> y;
  y[0] = f(probe_at(c, h, -1));
  for (int i = 0; i < 15; ++i) y[i + 1] = f(c + h * nodes()[i].x);
  y[16] = f(probe_at(c, h, 1));
  return combine(y, h, 17);
}

/// Adaptive integral over [a, b] split at the cuts inside it; each piece
/// gets the share of abs_tol proportional to its length.
template <class Rule>
QuadResult piecewise(const Rule& rule, double a, double b, std::vector<double> cuts,
                     double abs_tol, const QuadConfig& cfg) {
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> pts{a};
  for (double c : cuts)
    if (c > pts.back() && c < b) pts.push_back(c);
  pts.push_back(b);
  if (pts.size() == 2) return adaptive(rule, a, b, abs_tol, cfg.rel_tol, cfg.max_depth, cfg.max_evals);
  QuadResult total;
  const char* failure = nullptr;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    double lo = pts[i], hi = pts[i + 1];
    QuadResult r;
    try {
      r = adaptive(rule, lo, hi, abs_tol * (hi - lo) / (b - a), cfg.rel_tol, cfg.max_depth,
                   cfg.max_evals);
    } catch (const NonConvergence& e) {
      if (!std::isfinite(e.best_value())) throw;
      failure = e.where() == "depth limit reached" ? "depth limit reached" : "evaluation limit reached";
      r.value = e.best_value();
      r.error_estimate = e.error_estimate();
    }
    total.value += r.value;
    total.error_estimate += r.error_estimate;
    total.evals += r.evals;
  }
  if (failure) throw NonConvergence(total.value, total.error_estimate, failure);
  return total;
}

/// Integral over axes [axis, dim) with coordinates [0, axis) fixed in `x`.
QuadResult iterated(const IntegrandND& f, const Box& box, int axis, std::vector<double>& x,
                    double abs_tol, const QuadConfig& cfg, const Breakpoints& breaks) {
  double a = box.lower[axis], b = box.upper[axis];
  std::vector<double> cuts;
  if (breaks) breaks(axis, std::span<const double>(x.data(), axis), cuts);
  if (axis == box.dim() - 1) {
    auto rule = [&](double lo, double hi) {
      double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
      auto at = [&](double t) {
        x[axis] = t;
        return f(std::span<const double>(x));
      };
      std::array<double, 17> y;
      y[0] = at(probe_at(c, h, -1));
      for (int i = 0; i < 15; ++i) y[i + 1] = at(c + h * nodes()[i].x);
      y[16] = at(probe_at(c, h, 1));
      return combine(y, h, 17);
    };
    return piecewise(rule, a, b, std::move(cuts), abs_tol, cfg);
  }
  // Inner integrals share the absolute tolerance out evenly over this axis so
  // their integrated error stays within it.
  double inner_tol = abs_tol / (b - a);
  auto rule = [&](double lo, double hi) {
    double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    double inner_err = 0;
    long evals = 0;
    auto at = [&](double t) {
      x[axis] = t;
      QuadResult r;
      try {
        r = iterated(f, box, axis + 1, x, inner_tol, cfg, breaks);
      } catch (const NonConvergence& e) {
        if (!std::isfinite(e.best_value())) throw;
        r.value = e.best_value();
        r.error_estimate = e.error_estimate();
      }
      evals += r.evals;
      return r;
    };
    std::array<double, 17> y;
    y[0] = at(probe_at(c, h, -1)).value;
    for (int i = 0; i < 15; ++i) {
      QuadResult r = at(c + h * nodes()[i].x);
      y[i + 1] = r.value;
      inner_err += nodes()[i].wk * r.error_estimate;
    }
    y[16] = at(probe_at(c, h, 1)).value;
    PanelEstimate est = combine(y, h, evals);
    est.error += inner_err * h;
    return est;
  };
  return piecewise(rule, a, b, std::move(cuts), abs_tol, cfg);
}

struct BoxPanel {
  std::vector<double> lo, hi;
  std::vector<int> depth;
  double value, error;
};

struct BoxWorseFirst {
  bool operator()(const BoxPanel& p, const BoxPanel& q) const {
    if (p.error != q.error) return p.error < q.error;
    return std::lexicographical_compare(q.lo.begin(), q.lo.end(), p.lo.begin(), p.lo.end());
  }
};

/// Tensor-product Gauss-Kronrod estimate on one box.
void tensor_rule(const IntegrandND& f, BoxPanel& p, long& evals) {
  int n = static_cast<int>(p.lo.size());
  std::vector<double> x(n), c(n), h(n);
  double vol = 1;
  for (int i = 0; i < n; ++i) {
    c[i] = 0.5 * (p.lo[i] + p.hi[i]);
    h[i] = 0.5 * (p.hi[i] - p.lo[i]);
    vol *= h[i];
  }
  std::vector<int> idx(n, 0);
  double k = 0, g = 0;
  const auto& tab = nodes();
  for (;;) {
    double wk = 1, wg = 1;
    for (int i = 0; i < n; ++i) {
      x[i] = c[i] + h[i] * tab[idx[i]].x;
      wk *= tab[idx[i]].wk;
      wg *= tab[idx[i]].wg;
    }
    double y = f(std::span<const double>(x));
    k += wk * y;
    g += wg * y;
    ++evals;
    int i = 0;
    while (i < n && ++idx[i] == 15) idx[i++] = 0;
    if (i == n) break;
  }
  p.value = k * vol;
  p.error = std::fabs(k - g) * vol;
}

QuadResult bisection(const IntegrandND& f, const Box& box, const QuadConfig& cfg) {
  int n = box.dim();
  std::priority_queue<BoxPanel, std::vector<BoxPanel>, BoxWorseFirst> queue;
  std::vector<BoxPanel> frozen;
  long evals = 0;
  BoxPanel root{box.lower, box.upper, std::vector<int>(n, 0), 0, 0};
  tensor_rule(f, root, evals);
  double value = root.value, error = root.error;
  queue.push(root);
  auto totals = [&]() {
    std::vector<BoxPanel> all = frozen;
    auto copy = queue;
    while (!copy.empty()) {
      all.push_back(copy.top());
      copy.pop();
    }
    std::sort(all.begin(), all.end(), [](const BoxPanel& p, const BoxPanel& q) { return p.lo < q.lo; });
    QuadResult r;
    for (const auto& p : all) {
      r.value += p.value;
      r.error_estimate += p.error;
    }
    r.evals = evals;
    return r;
  };
  for (;;) {
    if (!std::isfinite(value) || !std::isfinite(error))
      throw NonConvergence(value, INFINITY, "integrand is not finite");
    if (error <= std::max(cfg.abs_tol, cfg.rel_tol * std::fabs(value))) {
      QuadResult r = totals();
      if (r.error_estimate <= std::max(cfg.abs_tol, cfg.rel_tol * std::fabs(r.value))) return r;
      value = r.value;
      error = r.error_estimate;
    }
    if (queue.empty() || evals >= cfg.max_evals) {
      QuadResult r = totals();
      throw NonConvergence(r.value, r.error_estimate,
                           queue.empty() ? "depth limit reached" : "evaluation limit reached");
    }
    BoxPanel p = queue.top();
    queue.pop();
    int axis = -1;
    double widest = -1;
    for (int i = 0; i < n; ++i) {
      double w = p.hi[i] - p.lo[i];
      if (p.depth[i] < cfg.max_depth_box && w > widest) {
        widest = w;
        axis = i;
      }
    }
    if (axis < 0) {
      frozen.push_back(p);
      continue;
    }
    double mid = 0.5 * (p.lo[axis] + p.hi[axis]);
    BoxPanel l = p, r = p;
    l.hi[axis] = mid;
    r.lo[axis] = mid;
    ++l.depth[axis];
    ++r.depth[axis];
    tensor_rule(f, l, evals);
    tensor_rule(f, r, evals);
    value += l.value + r.value - p.value;
    error += l.error + r.error - p.error;
    queue.push(l);
    queue.push(r);
  }
}

}  // namespace

QuadResult integrate_1d(const Integrand1D& f, double a, double b, const QuadConfig& cfg) {
  cfg.validate();
  if (a == b) return {};
  if (a > b) {
    QuadResult r = integrate_1d(f, b, a, cfg);
    r.value = -r.value;
    return r;
  }
  auto rule = [&](double lo, double hi) { return gk15(f, lo, hi); };
  return adaptive(rule, a, b, cfg.abs_tol, cfg.rel_tol, cfg.max_depth, cfg.max_evals);
}

QuadResult integrate_box(const IntegrandND& f, const Box& box, const QuadConfig& cfg,
                         const Breakpoints& breaks) {
  cfg.validate();
  int n = box.dim();
  if (n < 1 || n > 3)
    throw UnsupportedDimension("quadrature supports dimensions 1 to 3, got " + std::to_string(n));
  for (int i = 0; i < n; ++i)
    if (!(box.lower[i] < box.upper[i])) return {};
  if (n == 1 || cfg.box_mode == QuadConfig::BoxMode::Iterated) {
    std::vector<double> x(n);
    return iterated(f, box, 0, x, cfg.abs_tol, cfg, breaks);
  }
  return bisection(f, box, cfg);
}

}  // namespace ldelta
