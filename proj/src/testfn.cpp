#include "ldelta/testfn.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "ldelta/error.hpp"

namespace ldelta {
namespace {

// Below this exp() underflows to zero, and so do all derivatives that the
// Taylor recurrences would produce from it.
constexpr double kExpFloor = -745.0;
constexpr double kBumpEdge = 1e-14;

using Series = std::vector<double>;

Series recip(const Series& a) {
  Series b(a.size(), 0.0);
  b[0] = 1.0 / a[0];
  for (std::size_t n = 1; n < a.size(); ++n) {
    double s = 0;
    for (std::size_t j = 1; j <= n; ++j) s += a[j] * b[n - j];
    b[n] = -s * b[0];
  }
  return b;
}

Series exp_series(const Series& a) {
  Series e(a.size(), 0.0);
  e[0] = std::exp(a[0]);
  for (std::size_t n = 1; n < a.size(); ++n) {
    double s = 0;
    for (std::size_t j = 1; j <= n; ++j) s += static_cast<double>(j) * a[j] * e[n - j];
    e[n] = s / static_cast<double>(n);
  }
  return e;
}

Series mul(const Series& a, const Series& b) {
  Series c(a.size(), 0.0);
  for (std::size_t n = 0; n < a.size(); ++n)
    for (std::size_t j = 0; j <= n; ++j) c[n] += a[j] * b[n - j];
  return c;
}

/// exp(-1 / p(t)) for a polynomial p with p(0) > 0 given by its coefficients.
Series exp_neg_recip(Series p) {
  Series q = recip(p);
  for (double& v : q) v = -v;
  if (q[0] < kExpFloor) return Series(p.size(), 0.0);
  return exp_series(q);
}

Series bump_series(double c, double r, double x0, int k) {
  Series out(k + 1, 0.0);
  double u = (x0 - c) / r;
  double w0 = 1.0 - u * u;
  if (w0 <= kBumpEdge) return out;
  Series w(k + 1, 0.0);
  w[0] = w0;
  if (k >= 1) w[1] = -2.0 * u / r;
  if (k >= 2) w[2] = -1.0 / (r * r);
  return exp_neg_recip(w);
}

Series g_series(double t0, double slope, int k) {
  if (t0 <= 0) return Series(k + 1, 0.0);
  Series t(k + 1, 0.0);
  t[0] = t0;
  if (k >= 1) t[1] = slope;
  return exp_neg_recip(t);
}

Series smoothstep_series(double t0, double slope, int k) {
  Series out(k + 1, 0.0);
  if (t0 <= 0) return out;
  if (t0 >= 1) {
    out[0] = 1.0;
    return out;
  }
  Series g1 = g_series(t0, slope, k);
  Series g2 = g_series(1.0 - t0, -slope, k);
  Series den(k + 1);
  for (int i = 0; i <= k; ++i) den[i] = g1[i] + g2[i];
  return mul(g1, recip(den));
}

Series plateau_axis_series(const TestFn& f, int axis, double x, int k) {
  double a1 = f.inner.lower[axis], b1 = f.inner.upper[axis];
  double a2 = f.outer.lower[axis], b2 = f.outer.upper[axis];
  Series out(k + 1, 0.0);
  if (x <= a2 || x >= b2) return out;
  if (x >= a1 && x <= b1) {
    out[0] = 1.0;
    return out;
  }
  if (x < a1) return smoothstep_series((x - a2) / (a1 - a2), 1.0 / (a1 - a2), k);
  return smoothstep_series((b2 - x) / (b2 - b1), -1.0 / (b2 - b1), k);
}

double plateau_axis(const TestFn& f, int axis, double x) {
  double a1 = f.inner.lower[axis], b1 = f.inner.upper[axis];
  double a2 = f.outer.lower[axis], b2 = f.outer.upper[axis];
  if (x <= a2 || x >= b2) return 0.0;
  if (x >= a1 && x <= b1) return 1.0;
  if (x < a1) return smoothstep((x - a2) / (a1 - a2));
  return smoothstep((b2 - x) / (b2 - b1));
}

Series axis_series(const TestFn& f, int axis, double x, int k) {
  if (f.kind == TestFn::Kind::Bump) return bump_series(f.center[axis], f.radius, x, k);
  return plateau_axis_series(f, axis, x, k);
}

double factorial(int n) {
  double r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

/// d^alpha f at x.
double partial(const TestFn& f, std::span<const double> x, std::vector<int>& alpha) {
  if (!f.support.contains(x)) return 0.0;
  switch (f.kind) {
    case TestFn::Kind::Bump:
    case TestFn::Kind::Plateau: {
      double prod = 1;
      for (int i = 0; i < f.dim && prod != 0.0; ++i) {
        if (alpha[i] == 0) {
          prod *= f.kind == TestFn::Kind::Bump ? eval_bump_1d(f.center[i], f.radius, x[i])
                                               : plateau_axis(f, i, x[i]);
        } else {
          Series s = axis_series(f, i, x[i], alpha[i]);
          prod *= s[alpha[i]] * factorial(alpha[i]);
        }
      }
      return prod;
    }
    case TestFn::Kind::Scale:
      return f.coeff == 0.0 ? 0.0 : f.coeff * partial(*f.left, x, alpha);
    case TestFn::Kind::Sum:
      return partial(*f.left, x, alpha) + partial(*f.right, x, alpha);
    case TestFn::Kind::Deriv: {
      ++alpha[f.index - 1];
      double v = partial(*f.left, x, alpha);
      --alpha[f.index - 1];
      return v;
    }
  }
  return 0.0;
}

void check_order(const TestFn& f, int order) {
  int total = order + deriv_depth(f);
  if (total > max_order())
    throw OrderLimitExceeded("derivative order " + std::to_string(total) +
                             " exceeds the limit of " + std::to_string(max_order()));
}

/// Calls fn(alpha) for every multi-index with |alpha| <= k.
template <class Fn>
void for_each_index(int dim, int k, Fn&& fn) {
  std::vector<int> alpha(dim, 0);
  for (;;) {
    int total = 0;
    for (int a : alpha) total += a;
    if (total <= k) fn(std::span<const int>(alpha));
    int i = 0;
    while (i < dim && ++alpha[i] > k) alpha[i++] = 0;
    if (i == dim) return;
  }
}

Jet jet_rec(const TestFn& f, std::span<const double> x, int k) {
  Jet jet(std::vector<double>(x.begin(), x.end()), k);
  if (!f.support.contains(x)) return jet;
  switch (f.kind) {
    case TestFn::Kind::Bump:
    case TestFn::Kind::Plateau: {
      std::vector<Series> axes;
      for (int i = 0; i < f.dim; ++i) axes.push_back(axis_series(f, i, x[i], k));
      for_each_index(f.dim, k, [&](std::span<const int> alpha) {
        double c = 1;
        for (int i = 0; i < f.dim; ++i) c *= axes[i][alpha[i]];
        jet.at(alpha) = c;
      });
      return jet;
    }
    case TestFn::Kind::Scale: {
      Jet a = jet_rec(*f.left, x, k);
      for_each_index(f.dim, k, [&](std::span<const int> alpha) {
        jet.at(alpha) = f.coeff * a.coefficient(alpha);
      });
      return jet;
    }
    case TestFn::Kind::Sum: {
      Jet a = jet_rec(*f.left, x, k);
      Jet b = jet_rec(*f.right, x, k);
      for_each_index(f.dim, k, [&](std::span<const int> alpha) {
        jet.at(alpha) = a.coefficient(alpha) + b.coefficient(alpha);
      });
      return jet;
    }
    case TestFn::Kind::Deriv: {
      Jet a = jet_rec(*f.left, x, k + 1);
      int i = f.index - 1;
      for_each_index(f.dim, k, [&](std::span<const int> alpha) {
        std::vector<int> up(alpha.begin(), alpha.end());
        ++up[i];
        jet.at(alpha) = static_cast<double>(up[i]) * a.coefficient(up);
      });
      return jet;
    }
  }
  return jet;
}

void describe_to(const TestFn& f, std::ostringstream& out) {
  switch (f.kind) {
    case TestFn::Kind::Bump:
      out << "bump" << f.dim << "(c=(";
      for (int i = 0; i < f.dim; ++i) out << (i ? ", " : "") << f.center[i];
      out << "), r=" << f.radius << ")";
      return;
    case TestFn::Kind::Plateau:
      out << "plateau(" << to_string(f.inner) << ", " << to_string(f.outer) << ")";
      return;
    case TestFn::Kind::Scale:
      out << f.coeff << " * ";
      describe_to(*f.left, out);
      return;
    case TestFn::Kind::Sum:
      out << "(";
      describe_to(*f.left, out);
      out << " + ";
      describe_to(*f.right, out);
      out << ")";
      return;
    case TestFn::Kind::Deriv:
      out << "d/d" << f.index << "(";
      describe_to(*f.left, out);
      out << ")";
      return;
  }
}

}  // namespace

double eval_bump_1d(double c, double r, double x) {
  double u = (x - c) / r;
  double w = 1.0 - u * u;
  if (w <= kBumpEdge) return 0.0;
  return std::exp(-1.0 / w);
}

double smoothstep(double t) {
  if (t <= 0) return 0.0;
  if (t >= 1) return 1.0;
  double g1 = std::exp(-1.0 / t), g2 = std::exp(-1.0 / (1.0 - t));
  return g1 / (g1 + g2);
}

TestFnPtr bump(std::vector<double> center, double radius) {
  if (center.empty()) throw std::invalid_argument("bump center must have dimension >= 1");
  if (!(radius > 0)) throw std::invalid_argument("bump radius must be positive");
  auto f = std::make_shared<TestFn>();
  f->kind = TestFn::Kind::Bump;
  f->dim = static_cast<int>(center.size());
  f->support = Box::cube(center, radius);
  f->center = std::move(center);
  f->radius = radius;
  return f;
}

TestFnPtr plateau(Box inner, Box outer) {
  if (!inner.valid() || !outer.valid() || inner.dim() != outer.dim() ||
      !inner.strictly_inside(outer))
    throw std::invalid_argument("plateau needs an inner box strictly inside the outer box");
  auto f = std::make_shared<TestFn>();
  f->kind = TestFn::Kind::Plateau;
  f->dim = inner.dim();
  f->support = outer;
  f->inner = std::move(inner);
  f->outer = std::move(outer);
  return f;
}

TestFnPtr scale(double coeff, TestFnPtr g) {
  auto f = std::make_shared<TestFn>();
  f->kind = TestFn::Kind::Scale;
  f->dim = g->dim;
  f->support = g->support;
  f->coeff = coeff;
  f->left = std::move(g);
  return f;
}

TestFnPtr sum(TestFnPtr a, TestFnPtr b) {
  if (a->dim != b->dim)
    throw DimensionMismatch("cannot add test functions on R^" + std::to_string(a->dim) +
                            " and R^" + std::to_string(b->dim));
  auto f = std::make_shared<TestFn>();
  f->kind = TestFn::Kind::Sum;
  f->dim = a->dim;
  f->support = Box::hull(a->support, b->support);
  f->left = std::move(a);
  f->right = std::move(b);
  return f;
}

TestFnPtr derivative(TestFnPtr g, int i) {
  if (i < 1 || i > g->dim)
    throw IndexOutOfRange("axis " + std::to_string(i) + " out of range for a test function on R^" +
                          std::to_string(g->dim));
  auto f = std::make_shared<TestFn>();
  f->kind = TestFn::Kind::Deriv;
  f->dim = g->dim;
  f->support = g->support;
  f->index = i;
  f->left = std::move(g);
  return f;
}

double unit_bump_volume() {
  static const double v = [] {
    QuadConfig cfg;
    cfg.abs_tol = 1e-15;
    cfg.rel_tol = 1e-14;
    try {
      return integrate_1d([](double x) { return eval_bump_1d(0.0, 1.0, x); }, -1.0, 1.0, cfg).value;
    } catch (const NonConvergence& e) {
      return e.best_value();
    }
  }();
  return v;
}

TestFnPtr normalized_bump(std::vector<double> center, double radius) {
  double v = std::pow(radius * unit_bump_volume(), static_cast<double>(center.size()));
  return scale(1.0 / v, bump(std::move(center), radius));
}

double evaluate(const TestFn& f, std::span<const double> x) {
  if (static_cast<int>(x.size()) != f.dim)
    throw DimensionMismatch("test function on R^" + std::to_string(f.dim) +
                            " evaluated at a point of R^" + std::to_string(x.size()));
  if (f.kind != TestFn::Kind::Bump && f.kind != TestFn::Kind::Plateau) check_order(f, 0);
  std::vector<int> alpha(f.dim, 0);
  return partial(f, x, alpha);
}

Jet::Jet(std::vector<double> point, int order) : point_(std::move(point)), order_(order) {
  std::size_t n = 1;
  for (std::size_t i = 0; i < point_.size(); ++i) n *= static_cast<std::size_t>(order_ + 1);
  coeffs_.assign(n, 0.0);
}

std::size_t Jet::offset(std::span<const int> alpha) const {
  std::size_t off = 0;
  for (std::size_t i = alpha.size(); i-- > 0;) off = off * (order_ + 1) + alpha[i];
  return off;
}

double Jet::coefficient(std::span<const int> alpha) const {
  int total = 0;
  for (int a : alpha) {
    if (a < 0) return 0.0;
    total += a;
  }
  if (total > order_ || static_cast<int>(alpha.size()) != dim()) return 0.0;
  return coeffs_[offset(alpha)];
}

double Jet::derivative(std::span<const int> alpha) const {
  double c = coefficient(alpha);
  for (int a : alpha) c *= factorial(a);
  return c;
}

double Jet::value() const { return coeffs_[0]; }

double& Jet::at(std::span<const int> alpha) { return coeffs_[offset(alpha)]; }

Jet eval_jet(const TestFn& f, std::span<const double> x, int order) {
  if (static_cast<int>(x.size()) != f.dim)
    throw DimensionMismatch("test function on R^" + std::to_string(f.dim) +
                            " evaluated at a point of R^" + std::to_string(x.size()));
  if (order < 0) throw std::invalid_argument("jet order must be nonnegative");
  check_order(f, order);
  return jet_rec(f, x, order);
}

int max_order() {
  if (const char* s = std::getenv("LDELTA_MAX_ORDER")) {
    char* end = nullptr;
    long v = std::strtol(s, &end, 10);
    if (end != s && *end == '\0' && v > 0 && v < 64) return static_cast<int>(v);
  }
  return 8;
}

int deriv_depth(const TestFn& f) {
  switch (f.kind) {
    case TestFn::Kind::Scale: return deriv_depth(*f.left);
    case TestFn::Kind::Deriv: return 1 + deriv_depth(*f.left);
    case TestFn::Kind::Sum: return std::max(deriv_depth(*f.left), deriv_depth(*f.right));
    default: return 0;
  }
}

std::string describe(const TestFn& f) {
  std::ostringstream out;
  out.precision(12);
  describe_to(f, out);
  return out.str();
}

}  // namespace ldelta
