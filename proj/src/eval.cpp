#include "ldelta/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "ldelta/parser.hpp"

namespace ldelta {

Env Env::extend(std::string name, ValuePtr value) const {
  Env e;
  e.head_ = std::make_shared<const Node>(Node{std::move(name), std::move(value), head_});
  return e;
}

ValuePtr Env::lookup(const std::string& name) const {
  for (const Node* n = head_.get(); n; n = n->next.get())
    if (n->name == name) return n->value;
  return nullptr;
}

namespace {

template <class V>
ValuePtr wrap(V v) {
  return std::make_shared<const Value>(Value{std::move(v)});
}

[[noreturn]] void internal(const std::string& what) {
  throw std::logic_error("evaluator reached an ill-typed state: " + what);
}

template <class V>
const V& get(const ValuePtr& v, const char* what) {
  const V* p = std::get_if<V>(&v->v);
  if (!p) internal(std::string("expected ") + what);
  return *p;
}

void flatten_into(const ValuePtr& v, std::vector<double>& out) {
  if (const auto* p = std::get_if<VPair>(&v->v)) {
    flatten_into(p->first, out);
    flatten_into(p->second, out);
  } else {
    out.push_back(as_real(v));
  }
}

using namespace node;

using RealFn = std::function<double(std::span<const double>)>;
using BoolFn = std::function<bool(std::span<const double>)>;

/// Compiles predicate-body arithmetic to a host function of the coordinates;
/// other variables are read from the environment once.
class PredCompiler {
 public:
  PredCompiler(const PredLit& p, const Env& env) : p_(p), env_(env) {}

  BoolFn boolean(const TermPtr& t) {
    if (const auto* b = as<BoolLit>(t)) {
      bool v = b->value;
      return [v](std::span<const double>) { return v; };
    }
    if (const auto* l = as<Logic>(t)) {
      BoolFn a = boolean(l->args[0]);
      if (l->op == LogicOp::Not) return [a](std::span<const double> x) { return !a(x); };
      BoolFn b = boolean(l->args[1]);
      if (l->op == LogicOp::And) return [a, b](std::span<const double> x) { return a(x) && b(x); };
      return [a, b](std::span<const double> x) { return a(x) || b(x); };
    }
    if (const auto* c = as<Compare>(t)) {
      RealFn l = arith(c->lhs), r = arith(c->rhs);
      diffs_.push_back([l, r](std::span<const double> x) { return l(x) - r(x); });
      switch (c->op) {
        case CmpOp::Lt: return [l, r](std::span<const double> x) { return l(x) < r(x); };
        case CmpOp::Le: return [l, r](std::span<const double> x) { return l(x) <= r(x); };
        case CmpOp::Gt: return [l, r](std::span<const double> x) { return l(x) > r(x); };
        case CmpOp::Ge: return [l, r](std::span<const double> x) { return l(x) >= r(x); };
        case CmpOp::Eq: return [l, r](std::span<const double> x) { return l(x) == r(x); };
        case CmpOp::Ne: return [l, r](std::span<const double> x) { return l(x) != r(x); };
      }
    }
    internal("predicate body");
  }

  /// Along each axis, the root of every comparison whose two sides differ
  /// by an affine function of that coordinate alone (later coordinates
  /// free).  Other comparisons contribute nothing and are left to the
  /// adaptive quadrature.
  Breakpoints breaks() const {
    return [diffs = diffs_, n = p_.dim](int axis, std::span<const double> fixed,
                                         std::vector<double>& out) {
      std::vector<double> x(n);
      std::copy(fixed.begin(), fixed.end(), x.begin());
      auto at = [&](const RealFn& d, double t, double rest) {
        x[axis] = t;
        for (int i = axis + 1; i < n; ++i) x[i] = rest;
        return d(std::span<const double>(x));
      };
      for (const RealFn& d : diffs) {
        double d0 = at(d, 0, 0), d1 = at(d, 1, 0), d2 = at(d, 2, 0);
        double scale = std::fabs(d0) + std::fabs(d1) + std::fabs(d2);
        if (!(std::fabs(d0 - 2 * d1 + d2) <= 1e-12 * scale) || d1 == d0) continue;
        if (axis + 1 < n && (at(d, 0, 1) != d0 || at(d, 1, 1) != d1)) continue;
        double root = -d0 / (d1 - d0);
        if (std::isfinite(root)) out.push_back(root);
      }
    };
  }

 private:
  const PredLit& p_;
  const Env& env_;
  std::vector<RealFn> diffs_;

  RealFn arith(const TermPtr& t) {
    if (const auto* v = as<Var>(t)) {
      for (std::size_t i = 0; i < p_.vars.size(); ++i)
        if (p_.vars[i] == v->name) return [i](std::span<const double> x) { return x[i]; };
      ValuePtr bound = env_.lookup(v->name);
      if (!bound) internal("unbound variable " + v->name);
      double c = as_real(bound);
      return [c](std::span<const double>) { return c; };
    }
    if (const auto* r = as<RealLit>(t)) {
      double c = r->value;
      return [c](std::span<const double>) { return c; };
    }
    if (const auto* a = as<Arith>(t)) {
      RealFn f = arith(a->args[0]);
      RealFn g = a->args.size() > 1 ? arith(a->args[1]) : RealFn{};
      int k = a->exponent;
      switch (a->op) {
        case ArithOp::Add: return [f, g](std::span<const double> x) { return f(x) + g(x); };
        case ArithOp::Sub: return [f, g](std::span<const double> x) { return f(x) - g(x); };
        case ArithOp::Mul: return [f, g](std::span<const double> x) { return f(x) * g(x); };
        case ArithOp::Div: return [f, g](std::span<const double> x) { return f(x) / g(x); };
        case ArithOp::Neg: return [f](std::span<const double> x) { return -f(x); };
        case ArithOp::Pow: return [f, k](std::span<const double> x) { return std::pow(f(x), k); };
        case ArithOp::Exp: return [f](std::span<const double> x) { return std::exp(f(x)); };
        case ArithOp::Log: return [f](std::span<const double> x) { return std::log(f(x)); };
        case ArithOp::Sin: return [f](std::span<const double> x) { return std::sin(f(x)); };
        case ArithOp::Cos: return [f](std::span<const double> x) { return std::cos(f(x)); };
        case ArithOp::Sqrt: return [f](std::span<const double> x) { return std::sqrt(f(x)); };
        default: break;
      }
    }
    internal("predicate arithmetic");
  }
};

ValuePtr real_arith(const Arith& a, const std::vector<ValuePtr>& args, const Span& span) {
  double x = as_real(args[0]);
  double y = args.size() > 1 ? as_real(args[1]) : 0.0;
  switch (a.op) {
    case ArithOp::Add: return make_real(x + y);
    case ArithOp::Sub: return make_real(x - y);
    case ArithOp::Mul: return make_real(x * y);
    case ArithOp::Div:
      if (y == 0.0) throw RuntimeError(span, "division by zero");
      return make_real(x / y);
    case ArithOp::Neg: return make_real(-x);
    case ArithOp::Pow:
      if (x == 0.0 && a.exponent < 0) throw RuntimeError(span, "division by zero in negative power");
      return make_real(std::pow(x, a.exponent));
    case ArithOp::Exp: return make_real(std::exp(x));
    case ArithOp::Log:
      if (!(x > 0.0)) throw RuntimeError(span, "log of nonpositive number " + format_real(x));
      return make_real(std::log(x));
    case ArithOp::Sin: return make_real(std::sin(x));
    case ArithOp::Cos: return make_real(std::cos(x));
    case ArithOp::Sqrt:
      if (x < 0.0) throw RuntimeError(span, "sqrt of negative number " + format_real(x));
      return make_real(std::sqrt(x));
    case ArithOp::Min: return make_real(std::min(x, y));
    case ArithOp::Max: return make_real(std::max(x, y));
  }
  internal("real arithmetic operator");
}

ValuePtr nat_arith(const Arith& a, const std::vector<ValuePtr>& args, const Span& span) {
  std::uint64_t x = as_nat(args[0]), y = as_nat(args[1]);
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  switch (a.op) {
    case ArithOp::Add:
      if (x > kMax - y) throw RuntimeError(span, "natural number overflow");
      return make_nat(x + y);
    case ArithOp::Mul:
      if (y != 0 && x > kMax / y) throw RuntimeError(span, "natural number overflow");
      return make_nat(x * y);
    case ArithOp::Min: return make_nat(std::min(x, y));
    case ArithOp::Max: return make_nat(std::max(x, y));
    default: internal("natural arithmetic operator");
  }
}

std::string closure_text(const VClosure& c) {
  return print(terms::lam(c.param, c.annot, c.body));
}

std::string fn_text(const ValuePtr& f) {
  if (const auto* c = std::get_if<VClosure>(&f->v)) return closure_text(*c);
  if (const auto* p = std::get_if<VPrim>(&f->v)) return p->name;
  return "<function>";
}

HostFn host_fn(const ValuePtr& f, const QuadConfig& cfg) {
  return [f, cfg](std::span<const double> x) { return as_real(apply(f, from_vector(x), cfg)); };
}

}  // namespace

ValuePtr make_real(double v) { return wrap(VReal{v}); }
ValuePtr make_nat(std::uint64_t v) { return wrap(VNat{v}); }
ValuePtr make_pair(ValuePtr a, ValuePtr b) { return wrap(VPair{std::move(a), std::move(b)}); }
ValuePtr make_prim(std::string name, int arity, PrimImpl impl) {
  return wrap(VPrim{std::move(name), arity, {}, std::move(impl)});
}

double as_real(const ValuePtr& v) { return get<VReal>(v, "a real").value; }
std::uint64_t as_nat(const ValuePtr& v) { return get<VNat>(v, "a natural").value; }
const DistPtr& as_dist(const ValuePtr& v) { return get<VDist>(v, "a distribution").dist; }
const TestFnPtr& as_test(const ValuePtr& v) { return get<VTest>(v, "a test function").fn; }

std::vector<double> flatten(const ValuePtr& v) {
  std::vector<double> out;
  flatten_into(v, out);
  return out;
}

ValuePtr from_vector(std::span<const double> x) {
  ValuePtr v = make_real(x.back());
  for (std::size_t i = x.size() - 1; i-- > 0;) v = make_pair(make_real(x[i]), v);
  return v;
}

ValuePtr apply(const ValuePtr& fn, const ValuePtr& arg, const QuadConfig& cfg) {
  if (const auto* c = std::get_if<VClosure>(&fn->v))
    return eval(c->env.extend(c->param, arg), c->body, cfg);
  if (const auto* p = std::get_if<VPrim>(&fn->v)) {
    std::vector<ValuePtr> args = p->args;
    args.push_back(arg);
    if (static_cast<int>(args.size()) == p->arity) return p->impl(args, cfg);
    return wrap(VPrim{p->name, p->arity, std::move(args), p->impl});
  }
  internal("application of a non-function");
}

ValuePtr iterate(const ValuePtr& seed, const ValuePtr& step, std::uint64_t n,
                 const QuadConfig& cfg) {
  ValuePtr x = seed;
  for (std::uint64_t i = 0; i < n; ++i) x = apply(step, x, cfg);
  return x;
}

ValuePtr eval(const Env& env, const TermPtr& t, const QuadConfig& cfg) {
  if (const auto* v = as<Var>(t)) {
    ValuePtr bound = env.lookup(v->name);
    if (!bound) internal("unbound variable " + v->name);
    return bound;
  }
  if (const auto* r = as<RealLit>(t)) return make_real(r->value);
  if (const auto* n = as<NatLit>(t)) return make_nat(n->value);
  if (const auto* p = as<Pair>(t)) return make_pair(eval(env, p->first, cfg), eval(env, p->second, cfg));
  if (const auto* lp = as<LetPair>(t)) {
    ValuePtr b = eval(env, lp->bound, cfg);
    const VPair& pr = get<VPair>(b, "a pair");
    return eval(env.extend(lp->first, pr.first).extend(lp->second, pr.second), lp->body, cfg);
  }
  if (const auto* l = as<Let>(t)) return eval(env.extend(l->name, eval(env, l->bound, cfg)), l->body, cfg);
  if (const auto* f = as<Lam>(t)) return wrap(VClosure{f->param, f->annot, f->body, env});
  if (const auto* a = as<App>(t)) {
    ValuePtr fn = eval(env, a->fn, cfg);
    return apply(fn, eval(env, a->arg, cfg), cfg);
  }
  if (const auto* l = as<Lift>(t)) {
    ValuePtr fn = eval(env, l->fn, cfg);
    int n = 1;
    if (const auto* c = std::get_if<VClosure>(&fn->v)) n = *real_vector_dim(*c->annot);
    else if (const auto* lam = as<Lam>(l->fn)) n = *real_vector_dim(*lam->annot);
    return wrap(VDist{lift_dist(host_fn(fn, cfg), n, fn_text(fn))});
  }
  if (const auto* in = as<Indicator>(t)) {
    ValuePtr p = eval(env, in->pred, cfg);
    const PredVal& pv = get<VPred>(p, "a predicate").pred;
    ValuePtr fn = eval(env, in->fn, cfg);
    return wrap(VDist{indicator(pv, host_fn(fn, cfg), pv.dim, fn_text(fn))});
  }
  if (const auto* d = as<PartialDeriv>(t)) return wrap(VDist{deriv(as_dist(eval(env, d->dist, cfg)), d->index)});
  if (const auto* s = as<DistAdd>(t))
    return wrap(VDist{add(as_dist(eval(env, s->left, cfg)), as_dist(eval(env, s->right, cfg)))});
  if (const auto* m = as<ScalarMul>(t)) {
    double c = as_real(eval(env, m->scalar, cfg));
    return wrap(VDist{scale(c, as_dist(eval(env, m->dist, cfg)))});
  }
  if (const auto* ap = as<DistApply>(t)) {
    DistPtr d = as_dist(eval(env, ap->dist, cfg));
    TestFnPtr phi = as_test(eval(env, ap->test, cfg));
    return make_real(pair(*d, phi, cfg));
  }
  if (const auto* b = as<Bump>(t)) {
    std::vector<double> c = flatten(eval(env, b->center, cfg));
    double r = as_real(eval(env, b->radius, cfg));
    if (!(r > 0)) throw RuntimeError(b->radius->span, "bump radius must be positive, got " + format_real(r));
    return wrap(VTest{bump(std::move(c), r)});
  }
  if (const auto* pl = as<Plateau>(t)) return wrap(VTest{plateau(pl->inner, pl->outer)});
  if (const auto* d = as<Dirac>(t)) return wrap(VDist{dirac(flatten(eval(env, d->point, cfg)))});
  if (const auto* it = as<Iter>(t)) {
    ValuePtr seed = eval(env, it->seed, cfg);
    ValuePtr step = eval(env, it->step, cfg);
    return make_prim("iter", 1, [seed, step](const std::vector<ValuePtr>& args, const QuadConfig& c) {
      return iterate(seed, step, as_nat(args[0]), c);
    });
  }
  if (const auto* a = as<Arith>(t)) {
    std::vector<ValuePtr> args;
    for (const auto& x : a->args) args.push_back(eval(env, x, cfg));
    if (std::holds_alternative<VNat>(args[0]->v)) return nat_arith(*a, args, t->span);
    return real_arith(*a, args, t->span);
  }
  if (const auto* p = as<PredLit>(t)) {
    PredCompiler comp(*p, env);
    BoolFn test = comp.boolean(p->body);
    return wrap(VPred{PredVal{p->dim, test, print(t), comp.breaks()}});
  }
  internal("comparison outside a predicate");
}

Env eval_definitions(Env env, const std::vector<TypedDefinition>& defs, const QuadConfig& cfg,
                     std::vector<ValuePtr>* values) {
  for (const auto& d : defs) {
    ValuePtr v = eval(env, d.body, cfg);
    if (values) values->push_back(v);
    env = env.extend(d.name, v);
  }
  return env;
}

std::string show(const ValuePtr& v) {
  if (const auto* r = std::get_if<VReal>(&v->v)) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", r->value);
    return buf;
  }
  if (const auto* n = std::get_if<VNat>(&v->v)) return std::to_string(n->value);
  if (const auto* p = std::get_if<VPair>(&v->v)) return "(" + show(p->first) + ", " + show(p->second) + ")";
  if (const auto* c = std::get_if<VClosure>(&v->v)) return "<function " + closure_text(*c) + ">";
  if (const auto* p = std::get_if<VPrim>(&v->v)) return "<builtin " + p->name + ">";
  if (const auto* p = std::get_if<VPred>(&v->v)) return "<predicate " + p->pred.description + ">";
  if (const auto* f = std::get_if<VTest>(&v->v)) return "<test function " + describe(*f->fn) + ">";
  if (const auto* d = std::get_if<VDist>(&v->v)) return "<distribution " + describe(*d->dist) + ">";
  return "<value>";
}

}  // namespace ldelta
