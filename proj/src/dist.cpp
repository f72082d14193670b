#include "ldelta/dist.hpp"

#include <cmath>
#include <sstream>

#include "ldelta/error.hpp"

namespace ldelta {

PredVal negate(const PredVal& p) {
  auto test = p.test;
  return PredVal{p.dim, [test](std::span<const double> x) { return !test(x); },
                 "not (" + p.description + ")", p.breaks};
}

namespace {

std::shared_ptr<DistExpr> node(DistExpr::Kind kind, int dim) {
  auto d = std::make_shared<DistExpr>();
  d->kind = kind;
  d->dim = dim;
  return d;
}

void require_dim(int a, int b, const char* what) {
  if (a != b)
    throw DimensionMismatch(std::string(what) + ": R^" + std::to_string(a) + " vs R^" +
                            std::to_string(b));
}

PairResult integrate(const IntegrandND& f, const TestFn& phi, const QuadConfig& cfg,
                     const DistExpr& where, const Breakpoints& breaks = {}) {
  try {
    QuadResult r = integrate_box(f, phi.support, cfg, breaks);
    return {r.value, r.error_estimate, r.evals};
  } catch (const NonConvergence& e) {
    throw NonConvergence(e.best_value(), e.error_estimate(),
                         "<" + describe(where) + ", " + describe(phi) + "> (" + e.where() + ")");
  }
}

}  // namespace

DistPtr dirac(std::vector<double> point) {
  auto d = node(DistExpr::Kind::Dirac, static_cast<int>(point.size()));
  d->point = std::move(point);
  return d;
}

DistPtr lift_dist(HostFn f, int dim, std::string description) {
  auto d = node(DistExpr::Kind::Lift, dim);
  d->fn = std::move(f);
  d->fn_description = std::move(description);
  return d;
}

DistPtr indicator(PredVal b, HostFn f, int dim, std::string description) {
  require_dim(b.dim, dim, "indicator predicate and function");
  auto d = node(DistExpr::Kind::Ind, dim);
  d->pred = std::move(b);
  d->fn = std::move(f);
  d->fn_description = std::move(description);
  return d;
}

DistPtr add(DistPtr t, DistPtr s) {
  require_dim(t->dim, s->dim, "distribution sum");
  auto d = node(DistExpr::Kind::Sum, t->dim);
  d->left = std::move(t);
  d->right = std::move(s);
  return d;
}

DistPtr scale(double alpha, DistPtr t) {
  auto d = node(DistExpr::Kind::Scale, t->dim);
  d->coeff = alpha;
  d->left = std::move(t);
  return d;
}

DistPtr deriv(DistPtr t, int i) {
  if (i < 1 || i > t->dim)
    throw IndexOutOfRange("axis " + std::to_string(i) + " out of range for a distribution on R^" +
                          std::to_string(t->dim));
  auto d = node(DistExpr::Kind::Deriv, t->dim);
  d->index = i;
  d->left = std::move(t);
  return d;
}

PairResult pair_detailed(const DistExpr& t, const TestFnPtr& phi, const QuadConfig& cfg) {
  require_dim(t.dim, phi->dim, "pairing");
  switch (t.kind) {
    case DistExpr::Kind::Dirac:
      return {evaluate(*phi, t.point), 0.0, 1};
    case DistExpr::Kind::Lift: {
      const TestFn& p = *phi;
      const HostFn& f = t.fn;
      return integrate(
          [&](std::span<const double> x) {
            double w = evaluate(p, x);
            return w == 0.0 ? 0.0 : f(x) * w;
          },
          p, cfg, t);
    }
    case DistExpr::Kind::Ind: {
      const TestFn& p = *phi;
      const HostFn& f = t.fn;
      const auto& b = t.pred.test;
      return integrate(
          [&](std::span<const double> x) {
            double w = evaluate(p, x);
            if (w == 0.0 || !b(x)) return 0.0;
            return f(x) * w;
          },
          p, cfg, t, t.pred.breaks);
    }
    case DistExpr::Kind::Sum: {
      PairResult l = pair_detailed(*t.left, phi, cfg);
      PairResult r = pair_detailed(*t.right, phi, cfg);
      return {l.value + r.value, l.error_estimate + r.error_estimate, l.evals + r.evals};
    }
    case DistExpr::Kind::Scale: {
      if (t.coeff == 0.0) return {};
      PairResult a = pair_detailed(*t.left, phi, cfg);
      return {t.coeff * a.value, std::fabs(t.coeff) * a.error_estimate, a.evals};
    }
    case DistExpr::Kind::Deriv: {
      PairResult a = pair_detailed(*t.left, derivative(phi, t.index), cfg);
      return {-a.value, a.error_estimate, a.evals};
    }
  }
  return {};
}

double pair(const DistExpr& t, const TestFnPtr& phi, const QuadConfig& cfg) {
  return pair_detailed(t, phi, cfg).value;
}

std::string describe(const DistExpr& t) {
  std::ostringstream out;
  out.precision(12);
  switch (t.kind) {
    case DistExpr::Kind::Dirac:
      out << "dirac(";
      for (std::size_t i = 0; i < t.point.size(); ++i) out << (i ? ", " : "") << t.point[i];
      out << ")";
      break;
    case DistExpr::Kind::Lift:
      out << "lift(" << t.fn_description << ")";
      break;
    case DistExpr::Kind::Ind:
      out << "ind(" << t.pred.description << ", " << t.fn_description << ")";
      break;
    case DistExpr::Kind::Sum:
      out << describe(*t.left) << " +. " << describe(*t.right);
      break;
    case DistExpr::Kind::Scale:
      out << t.coeff << " *. (" << describe(*t.left) << ")";
      break;
    case DistExpr::Kind::Deriv:
      out << "d/d" << t.index << "(" << describe(*t.left) << ")";
      break;
  }
  return out.str();
}

}  // namespace ldelta
