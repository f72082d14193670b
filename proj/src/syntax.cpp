#include "ldelta/syntax.hpp"

#include <algorithm>
#include <functional>

namespace ldelta {

// ---------------------------------------------------------------------------
// Types

namespace {
TypePtr make_type(TypeKind kind, int dim = 0, TypePtr l = nullptr,
                  TypePtr r = nullptr) {
  return std::make_shared<const Type>(Type{kind, dim, std::move(l), std::move(r)});
}
}  // namespace

TypePtr real_type() {
  static const TypePtr t = make_type(TypeKind::Real);
  return t;
}
TypePtr pos_real_type() {
  static const TypePtr t = make_type(TypeKind::PosReal);
  return t;
}
TypePtr nat_type() {
  static const TypePtr t = make_type(TypeKind::Nat);
  return t;
}
TypePtr pred_type(int dim) { return make_type(TypeKind::Pred, dim); }
TypePtr test_type(int dim) { return make_type(TypeKind::Test, dim); }
TypePtr dist_type(int dim) { return make_type(TypeKind::Dist, dim); }
TypePtr prod_type(TypePtr left, TypePtr right) {
  return make_type(TypeKind::Prod, 0, std::move(left), std::move(right));
}
TypePtr arrow_type(TypePtr domain, TypePtr codomain) {
  return make_type(TypeKind::Arrow, 0, std::move(domain), std::move(codomain));
}

TypePtr real_vector_type(int n) {
  TypePtr t = real_type();
  for (int i = 1; i < n; ++i) t = prod_type(real_type(), t);
  return t;
}

bool type_equal(const Type& a, const Type& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case TypeKind::Real:
    case TypeKind::PosReal:
    case TypeKind::Nat:
      return true;
    case TypeKind::Pred:
    case TypeKind::Test:
    case TypeKind::Dist:
      return a.dim == b.dim;
    case TypeKind::Prod:
    case TypeKind::Arrow:
      return type_equal(*a.left, *b.left) && type_equal(*a.right, *b.right);
  }
  return false;
}

std::optional<int> real_vector_dim(const Type& t) {
  if (t.kind == TypeKind::Real) return 1;
  if (t.kind == TypeKind::Prod && t.left->kind == TypeKind::Real) {
    if (auto rest = real_vector_dim(*t.right)) return *rest + 1;
  }
  return std::nullopt;
}

namespace {
std::string vec_name(int n) { return "R^" + std::to_string(n); }
}  // namespace

std::string to_string(const Type& t) {
  switch (t.kind) {
    case TypeKind::Real: return "R";
    case TypeKind::PosReal: return "R+";
    case TypeKind::Nat: return "N";
    case TypeKind::Pred: return "Pred(" + vec_name(t.dim) + ")";
    case TypeKind::Test: return "Test(" + vec_name(t.dim) + ")";
    case TypeKind::Dist: return "Dist(" + vec_name(t.dim) + ")";
    case TypeKind::Prod: {
      if (auto n = real_vector_dim(t)) return vec_name(*n);
      std::string l = to_string(*t.left);
      if (t.left->kind == TypeKind::Prod || t.left->kind == TypeKind::Arrow)
        l = "(" + l + ")";
      std::string r = to_string(*t.right);
      if (t.right->kind == TypeKind::Arrow) r = "(" + r + ")";
      return l + " * " + r;
    }
    case TypeKind::Arrow: {
      std::string l = to_string(*t.left);
      if (t.left->kind == TypeKind::Arrow) l = "(" + l + ")";
      return l + " -> " + to_string(*t.right);
    }
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Operators

const char* op_name(ArithOp op) {
  switch (op) {
    case ArithOp::Add: return "+";
    case ArithOp::Sub: return "-";
    case ArithOp::Mul: return "*";
    case ArithOp::Div: return "/";
    case ArithOp::Neg: return "neg";
    case ArithOp::Pow: return "^";
    case ArithOp::Exp: return "exp";
    case ArithOp::Log: return "log";
    case ArithOp::Sin: return "sin";
    case ArithOp::Cos: return "cos";
    case ArithOp::Sqrt: return "sqrt";
    case ArithOp::Min: return "min";
    case ArithOp::Max: return "max";
  }
  return "?";
}

const char* op_name(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "!=";
  }
  return "?";
}

const char* op_name(LogicOp op) {
  switch (op) {
    case LogicOp::And: return "and";
    case LogicOp::Or: return "or";
    case LogicOp::Not: return "not";
  }
  return "?";
}

int arity(ArithOp op) {
  switch (op) {
    case ArithOp::Add:
    case ArithOp::Sub:
    case ArithOp::Mul:
    case ArithOp::Div:
    case ArithOp::Min:
    case ArithOp::Max:
      return 2;
    default:
      return 1;
  }
}

// ---------------------------------------------------------------------------
// Builders

namespace terms {
using namespace node;
TermPtr var(std::string name) { return make_term(Var{std::move(name)}); }
TermPtr real(double v) { return make_term(RealLit{v}); }
TermPtr nat(std::uint64_t v) { return make_term(NatLit{v}); }
TermPtr pair(TermPtr a, TermPtr b) { return make_term(Pair{a, b}); }
TermPtr let(std::string x, TermPtr bound, TermPtr body) {
  return make_term(Let{std::move(x), bound, body});
}
TermPtr let_pair(std::string x, std::string y, TermPtr bound, TermPtr body) {
  return make_term(LetPair{std::move(x), std::move(y), bound, body});
}
TermPtr lam(std::string x, TypePtr annot, TermPtr body) {
  return make_term(Lam{std::move(x), std::move(annot), body});
}
TermPtr app(TermPtr fn, TermPtr arg) { return make_term(App{fn, arg}); }
TermPtr app(TermPtr fn, std::initializer_list<TermPtr> args) {
  for (const auto& a : args) fn = app(fn, a);
  return fn;
}
TermPtr lift(TermPtr fn) { return make_term(Lift{fn}); }
TermPtr ind(TermPtr pred, TermPtr fn) { return make_term(Indicator{pred, fn}); }
TermPtr deriv(int index, TermPtr dist) { return make_term(PartialDeriv{index, dist}); }
TermPtr dist_add(TermPtr a, TermPtr b) { return make_term(DistAdd{a, b}); }
TermPtr scalar_mul(TermPtr s, TermPtr d) { return make_term(ScalarMul{s, d}); }
TermPtr apply(TermPtr dist, TermPtr test) { return make_term(DistApply{dist, test}); }
TermPtr bump(int dim, TermPtr center, TermPtr radius) {
  return make_term(Bump{dim, center, radius});
}
TermPtr plateau(Box inner, Box outer) {
  return make_term(Plateau{std::move(inner), std::move(outer)});
}
TermPtr dirac(TermPtr point) { return make_term(Dirac{point}); }
TermPtr iter(TermPtr seed, TermPtr step) { return make_term(Iter{seed, step}); }
TermPtr arith(ArithOp op, std::vector<TermPtr> args) {
  return make_term(Arith{op, std::move(args), 0});
}
TermPtr pow(TermPtr base, int exponent) {
  return make_term(Arith{ArithOp::Pow, {base}, exponent});
}
TermPtr cmp(CmpOp op, TermPtr lhs, TermPtr rhs) { return make_term(Compare{op, lhs, rhs}); }
TermPtr logic(LogicOp op, std::vector<TermPtr> args) {
  return make_term(Logic{op, std::move(args)});
}
TermPtr boolean(bool v) { return make_term(BoolLit{v}); }
TermPtr pred(std::vector<std::string> vars, int dim, TermPtr body) {
  return make_term(PredLit{std::move(vars), dim, body});
}
}  // namespace terms

// ---------------------------------------------------------------------------
// Generic traversal

namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

/// Children of a term that are not under any binder introduced by the term
/// itself, followed by the (names, body) pair for the scoped child, if any.
struct Shape {
  std::vector<TermPtr> open;
  std::vector<std::string> binders;
  TermPtr scoped;
};

Shape shape_of(const TermPtr& t) {
  using namespace node;
  return std::visit(
      overloaded{
          [](const Var&) { return Shape{}; },
          [](const RealLit&) { return Shape{}; },
          [](const NatLit&) { return Shape{}; },
          [](const BoolLit&) { return Shape{}; },
          [](const Plateau&) { return Shape{}; },
          [](const Pair& n) { return Shape{{n.first, n.second}, {}, nullptr}; },
          [](const LetPair& n) {
            return Shape{{n.bound}, {n.first, n.second}, n.body};
          },
          [](const Let& n) { return Shape{{n.bound}, {n.name}, n.body}; },
          [](const Lam& n) { return Shape{{}, {n.param}, n.body}; },
          [](const App& n) { return Shape{{n.fn, n.arg}, {}, nullptr}; },
          [](const Lift& n) { return Shape{{n.fn}, {}, nullptr}; },
          [](const Indicator& n) { return Shape{{n.pred, n.fn}, {}, nullptr}; },
          [](const PartialDeriv& n) { return Shape{{n.dist}, {}, nullptr}; },
          [](const DistAdd& n) { return Shape{{n.left, n.right}, {}, nullptr}; },
          [](const ScalarMul& n) { return Shape{{n.scalar, n.dist}, {}, nullptr}; },
          [](const DistApply& n) { return Shape{{n.dist, n.test}, {}, nullptr}; },
          [](const Bump& n) { return Shape{{n.center, n.radius}, {}, nullptr}; },
          [](const Dirac& n) { return Shape{{n.point}, {}, nullptr}; },
          [](const Iter& n) { return Shape{{n.seed, n.step}, {}, nullptr}; },
          [](const Arith& n) { return Shape{n.args, {}, nullptr}; },
          [](const Compare& n) { return Shape{{n.lhs, n.rhs}, {}, nullptr}; },
          [](const Logic& n) { return Shape{n.args, {}, nullptr}; },
          [](const PredLit& n) { return Shape{{}, n.vars, n.body}; },
      },
      t->node);
}

/// Rebuilds `t` with new children in the order produced by `shape_of`.
TermPtr rebuild(const TermPtr& t, const std::vector<TermPtr>& open,
                const std::vector<std::string>& binders, const TermPtr& scoped) {
  using namespace node;
  TermNode n = std::visit(
      overloaded{
          [&](const Var& v) -> TermNode { return v; },
          [&](const RealLit& v) -> TermNode { return v; },
          [&](const NatLit& v) -> TermNode { return v; },
          [&](const BoolLit& v) -> TermNode { return v; },
          [&](const Plateau& v) -> TermNode { return v; },
          [&](const Pair&) -> TermNode { return Pair{open[0], open[1]}; },
          [&](const LetPair&) -> TermNode {
            return LetPair{binders[0], binders[1], open[0], scoped};
          },
          [&](const Let&) -> TermNode { return Let{binders[0], open[0], scoped}; },
          [&](const Lam& v) -> TermNode { return Lam{binders[0], v.annot, scoped}; },
          [&](const App&) -> TermNode { return App{open[0], open[1]}; },
          [&](const Lift&) -> TermNode { return Lift{open[0]}; },
          [&](const Indicator&) -> TermNode { return Indicator{open[0], open[1]}; },
          [&](const PartialDeriv& v) -> TermNode { return PartialDeriv{v.index, open[0]}; },
          [&](const DistAdd&) -> TermNode { return DistAdd{open[0], open[1]}; },
          [&](const ScalarMul&) -> TermNode { return ScalarMul{open[0], open[1]}; },
          [&](const DistApply&) -> TermNode { return DistApply{open[0], open[1]}; },
          [&](const Bump& v) -> TermNode { return Bump{v.dim, open[0], open[1]}; },
          [&](const Dirac&) -> TermNode { return Dirac{open[0]}; },
          [&](const Iter&) -> TermNode { return Iter{open[0], open[1]}; },
          [&](const Arith& v) -> TermNode { return Arith{v.op, open, v.exponent}; },
          [&](const Compare& v) -> TermNode { return Compare{v.op, open[0], open[1]}; },
          [&](const Logic& v) -> TermNode { return Logic{v.op, open}; },
          [&](const PredLit& v) -> TermNode { return PredLit{binders, v.dim, scoped}; },
      },
      t->node);
  return std::make_shared<const Term>(Term{std::move(n), t->span});
}

void collect_free(const TermPtr& t, std::vector<std::string>& bound,
                  std::set<std::string>& out) {
  if (const auto* v = as<node::Var>(t)) {
    if (std::find(bound.begin(), bound.end(), v->name) == bound.end())
      out.insert(v->name);
    return;
  }
  Shape s = shape_of(t);
  for (const auto& c : s.open) collect_free(c, bound, out);
  if (s.scoped) {
    bound.insert(bound.end(), s.binders.begin(), s.binders.end());
    collect_free(s.scoped, bound, out);
    bound.resize(bound.size() - s.binders.size());
  }
}

TermPtr subst(const TermPtr& t, const std::string& x, const TermPtr& s,
              const std::set<std::string>& fv_s) {
  if (const auto* v = as<node::Var>(t)) return v->name == x ? s : t;
  Shape sh = shape_of(t);
  if (sh.open.empty() && !sh.scoped) return t;
  for (auto& c : sh.open) c = subst(c, x, s, fv_s);
  if (sh.scoped) {
    bool shadowed =
        std::find(sh.binders.begin(), sh.binders.end(), x) != sh.binders.end();
    if (!shadowed && is_free_in(x, sh.scoped)) {
      for (auto& b : sh.binders) {
        if (!fv_s.count(b)) continue;
        std::set<std::string> avoid = fv_s;
        avoid.merge(free_vars(sh.scoped));
        avoid.insert(x);
        avoid.insert(sh.binders.begin(), sh.binders.end());
        std::string renamed = fresh_name(b, avoid);
        sh.scoped = subst(sh.scoped, b, terms::var(renamed), {renamed});
        b = renamed;
      }
      sh.scoped = subst(sh.scoped, x, s, fv_s);
    }
  }
  return rebuild(t, sh.open, sh.binders, sh.scoped);
}

using Scope = std::vector<std::string>;

/// Position of the innermost binding of `name`, or -1 when free.
long lookup(const Scope& scope, const std::string& name) {
  for (long i = static_cast<long>(scope.size()) - 1; i >= 0; --i)
    if (scope[static_cast<std::size_t>(i)] == name) return i;
  return -1;
}

bool alpha(const TermPtr& a, const TermPtr& b, Scope& sa, Scope& sb) {
  using namespace node;
  if (a->node.index() != b->node.index()) return false;
  if (const auto* va = as<Var>(a)) {
    const auto* vb = as<Var>(b);
    long ia = lookup(sa, va->name), ib = lookup(sb, vb->name);
    if (ia != ib) return false;
    return ia >= 0 || va->name == vb->name;
  }
  // Leaf payloads and node-local attributes.
  bool same = std::visit(
      overloaded{
          [&](const RealLit& x) { return x.value == as<RealLit>(b)->value; },
          [&](const NatLit& x) { return x.value == as<NatLit>(b)->value; },
          [&](const BoolLit& x) { return x.value == as<BoolLit>(b)->value; },
          [&](const Plateau& x) {
            const auto* y = as<Plateau>(b);
            return x.inner == y->inner && x.outer == y->outer;
          },
          [&](const Lam& x) { return type_equal(*x.annot, *as<Lam>(b)->annot); },
          [&](const PartialDeriv& x) { return x.index == as<PartialDeriv>(b)->index; },
          [&](const Bump& x) { return x.dim == as<Bump>(b)->dim; },
          [&](const Arith& x) {
            const auto* y = as<Arith>(b);
            return x.op == y->op && x.exponent == y->exponent &&
                   x.args.size() == y->args.size();
          },
          [&](const Compare& x) { return x.op == as<Compare>(b)->op; },
          [&](const Logic& x) {
            const auto* y = as<Logic>(b);
            return x.op == y->op && x.args.size() == y->args.size();
          },
          [&](const PredLit& x) {
            const auto* y = as<PredLit>(b);
            return x.dim == y->dim && x.vars.size() == y->vars.size();
          },
          [](const auto&) { return true; },
      },
      a->node);
  if (!same) return false;
  Shape sha = shape_of(a), shb = shape_of(b);
  if (sha.open.size() != shb.open.size()) return false;
  for (std::size_t i = 0; i < sha.open.size(); ++i)
    if (!alpha(sha.open[i], shb.open[i], sa, sb)) return false;
  if (!sha.scoped) return !shb.scoped;
  if (sha.binders.size() != shb.binders.size()) return false;
  sa.insert(sa.end(), sha.binders.begin(), sha.binders.end());
  sb.insert(sb.end(), shb.binders.begin(), shb.binders.end());
  bool ok = alpha(sha.scoped, shb.scoped, sa, sb);
  sa.resize(sa.size() - sha.binders.size());
  sb.resize(sb.size() - shb.binders.size());
  return ok;
}

}  // namespace

std::set<std::string> free_vars(const TermPtr& t) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  collect_free(t, bound, out);
  return out;
}

bool is_free_in(const std::string& x, const TermPtr& t) {
  return free_vars(t).count(x) > 0;
}

TermPtr substitute(const TermPtr& t, const std::string& x, const TermPtr& s) {
  return subst(t, x, s, free_vars(s));
}

bool alpha_equal(const TermPtr& a, const TermPtr& b) {
  Scope sa, sb;
  return alpha(a, b, sa, sb);
}

std::string fresh_name(const std::string& base,
                       const std::set<std::string>& avoid) {
  std::string name = base + "'";
  while (avoid.count(name)) name += "'";
  return name;
}

}  // namespace ldelta
