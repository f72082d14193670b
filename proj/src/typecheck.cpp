#include "ldelta/typecheck.hpp"

namespace ldelta {

TypePtr Ctx::lookup(const std::string& name) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it)
    if (it->first == name) return it->second;
  return nullptr;
}

Ctx Ctx::extend(std::string name, TypePtr type) const {
  Ctx c = *this;
  c.entries_.emplace_back(std::move(name), std::move(type));
  return c;
}

namespace {

using namespace node;

[[noreturn]] void mismatch(const TermPtr& t, const std::string& rule,
                           const std::string& expected, const TypePtr& found) {
  throw TypeError(TypeErrorKind::Mismatch, t->span, rule,
                  "expected " + expected + ", found " + to_string(found));
}

std::string vec(int n) { return "R^" + std::to_string(n); }

bool is_real_like(const TypePtr& t) {
  return t->kind == TypeKind::Real || t->kind == TypeKind::PosReal;
}

/// Number of leaves of a tuple literal, 1 for anything else.
int tuple_width(const TermPtr& t) {
  if (const auto* p = as<Pair>(t)) return tuple_width(p->first) + tuple_width(p->second);
  return 1;
}

template <class Node>
TermPtr rebuilt(const TermPtr& t, Node n) {
  return make_term(std::move(n), t->span);
}

class Checker {
 public:
  Elaborated synth(const Ctx& ctx, const TermPtr& t) {
    return std::visit([&](const auto& n) { return synth_node(ctx, t, n); }, t->node);
  }

  Elaborated check(const Ctx& ctx, const TermPtr& t, const TypePtr& want,
                   const std::string& rule) {
    if (const auto* n = as<NatLit>(t)) {
      if (want->kind == TypeKind::Nat) return {want, t};
      if (want->kind == TypeKind::Real || (want->kind == TypeKind::PosReal && n->value > 0))
        return {want, rebuilt(t, RealLit{static_cast<double>(n->value)})};
      mismatch(t, rule, to_string(want), nat_type());
    }
    if (const auto* r = as<RealLit>(t)) {
      if (want->kind == TypeKind::Real) return {want, t};
      if (want->kind == TypeKind::PosReal) {
        if (r->value > 0) return {want, t};
        throw TypeError(TypeErrorKind::Mismatch, t->span, rule,
                        "expected R+, found nonpositive literal " + format_real(r->value));
      }
      mismatch(t, rule, to_string(want), real_type());
    }
    if (const auto* p = as<Pair>(t); p && want->kind == TypeKind::Prod) {
      Elaborated a = check(ctx, p->first, want->left, rule);
      Elaborated b = check(ctx, p->second, want->right, rule);
      return {want, rebuilt(t, Pair{a.term, b.term})};
    }
    if (const auto* f = as<Lam>(t); f && want->kind == TypeKind::Arrow) {
      if (!type_equal(f->annot, want->left))
        throw TypeError(TypeErrorKind::Mismatch, t->span, rule,
                        "expected " + to_string(want) + ", found a function on " +
                            to_string(f->annot));
      Elaborated body = check(ctx.extend(f->param, f->annot), f->body, want->right, rule);
      return {want, rebuilt(t, Lam{f->param, f->annot, body.term})};
    }
    if (const auto* l = as<Let>(t)) {
      Elaborated bound = synth(ctx, l->bound);
      Elaborated body = check(ctx.extend(l->name, bound.type), l->body, want, rule);
      return {want, rebuilt(t, Let{l->name, bound.term, body.term})};
    }
    if (const auto* a = as<Arith>(t); a && (want->kind == TypeKind::Real || want->kind == TypeKind::Nat)) {
      if (want->kind == TypeKind::Real || nat_op(a->op)) {
        if (want->kind == TypeKind::Real && (a->op == ArithOp::Min || a->op == ArithOp::Max))
          min_max_on_reals(t, a->op);
        std::vector<TermPtr> args;
        for (const auto& x : a->args) args.push_back(check(ctx, x, want, "Arithmetic").term);
        return {want, rebuilt(t, Arith{a->op, std::move(args), a->exponent})};
      }
    }
    Elaborated e = synth(ctx, t);
    if (!type_equal(e.type, want)) mismatch(t, rule, to_string(want), e.type);
    return e;
  }

 private:
  /// Real min and max are not smooth; they must be written with indicators.
  [[noreturn]] static void min_max_on_reals(const TermPtr& t, ArithOp op) {
    throw TypeError(TypeErrorKind::Mismatch, t->span, "Arithmetic",
                    std::string(op_name(op)) + " is only defined on N");
  }

  static bool nat_op(ArithOp op) {
    return op == ArithOp::Add || op == ArithOp::Mul || op == ArithOp::Min || op == ArithOp::Max;
  }

  int dist_dim(const Ctx& ctx, const TermPtr& t, const std::string& rule, TermPtr& out) {
    Elaborated e = synth(ctx, t);
    if (e.type->kind != TypeKind::Dist) mismatch(t, rule, "Dist(R^n)", e.type);
    out = e.term;
    return e.type->dim;
  }

  /// Checks a function argument of lift / ind against R^n -> R.  A lambda
  /// fixes n through its annotation; anything else must synthesize it.
  Elaborated smooth_fn(const Ctx& ctx, const TermPtr& f, const std::string& rule,
                       std::optional<int> want_dim) {
    TypePtr dom;
    if (const auto* lam = as<Lam>(f)) {
      dom = lam->annot;
    } else {
      Elaborated e = synth(ctx, f);
      if (e.type->kind != TypeKind::Arrow)
        mismatch(f, rule, want_dim ? vec(*want_dim) + " -> R" : "R^n -> R", e.type);
      dom = e.type->left;
    }
    auto n = real_vector_dim(*dom);
    if (!n || (want_dim && *n != *want_dim)) {
      Elaborated e = synth(ctx, f);
      mismatch(f, rule, want_dim ? vec(*want_dim) + " -> R" : "R^n -> R", e.type);
    }
    return check(ctx, f, arrow_type(dom, real_type()), rule);
  }

  Elaborated synth_node(const Ctx& ctx, const TermPtr& t, const Var& v) {
    TypePtr ty = ctx.lookup(v.name);
    if (!ty)
      throw TypeError(TypeErrorKind::UnboundVariable, t->span, "Variable",
                      "unbound variable " + v.name);
    return {ty, t};
  }

  Elaborated synth_node(const Ctx&, const TermPtr& t, const RealLit&) { return {real_type(), t}; }
  Elaborated synth_node(const Ctx&, const TermPtr& t, const NatLit&) { return {nat_type(), t}; }

  Elaborated synth_node(const Ctx& ctx, const TermPtr& t, const Pair& p) {
    Elaborated a = synth(ctx, p.first);
    Elaborated b = synth(ctx, p.second);
    return {prod_type(a.type, b.type), rebuilt(t, Pair{a.term, b.term})};
  }

  Elaborated synth_node(const Ctx& ctx, const TermPtr& t, const LetPair& lp) {
    Elaborated bound = synth(ctx, lp.bound);
    if (bound.type->kind != TypeKind::Prod) mismatch(lp.bound, "Unpair", "a product type", bound.type);
    Ctx inner = ctx.extend(lp.first, bound.type->left).extend(lp.second, bound.type->right);
    Elaborated body = synth(inner, lp.body);
    return {body.type, rebuilt(t, LetPair{lp.first, lp.second, bound.term, body.term})};
  }

  Elaborated synth_node(const Ctx& ctx, const TermPtr& t, const Let& l) {
    Elaborated bound = synth(ctx, l.bound);
    Elaborated body = synth(ctx.extend(l.name, bound.type), l.body);
    return {body.type, rebuilt(t, Let{l.name, bound.term, body.term})};
  }

  Elaborated synth_node(const Ctx& ctx, const TermPtr& t, const Lam& f) {
    Elaborated body = synth(ctx.extend(f.param, f.annot), f.body);
    return {arrow_type(f.annot, body.type), rebuilt(t, Lam{f.param, f.annot, body.term})};
  }

  Elaborated synth_node(const Ctx& ctx, const TermPtr& t, const App& a) {
    Elaborated fn = synth(ctx, a.fn);
    if (fn.type->kind != TypeKind::Arrow) mismatch(a.fn, "Application", "a function", fn.type);
    Elaborated arg = check(ctx, a.arg, fn.type->left, "Application");
    return {fn.type->right, rebuilt(t, App{fn.term, arg.term})};
  }

  Elaborated synth_node(const Ctx& ctx, const TermPtr& t, const Lift& l) {
    Elaborated f = smooth_fn(ctx, l.fn, "Lift", std::nullopt);
    int n = *real_vector_dim(*f.type->left);
    return {dist_type(n), rebuilt(t, Lift{f.term})};
  }

  Elaborated synth_node(const Ctx& ctx, const TermPtr& t, const Indicator& in) {
    Elaborated p = synth(ctx, in.pred);
    if (p.type->kind != TypeKind::Pred) mismatch(in.pred, "Indicator Function", "Pred(R^n)", p.type);
    Elaborated f = smooth_fn(ctx, in.fn, "Indicator Function", p.type->dim);
    return {dist_type(p.type->dim), rebuilt(t, Indicator{p.term, f.term})};
  }

  Elaborated synth_node(const Ctx& ctx, const TermPtr& t, const PartialDeriv& d) {
    TermPtr inner;
    int n = dist_dim(ctx, d.dist, "Differentiation", inner);
    if (d.index < 1 || d.index > n)
      throw TypeError(TypeErrorKind::IndexOutOfRange, t->span, "Differentiation",
                      "index " + std::to_string(d.index) + " out of range for Dist(" +
                          vec(n) + ")");
    return {dist_type(n), rebuilt(t, PartialDeriv{d.index, inner})};
  }

  Elaborated synth_node(const Ctx& ctx, const TermPtr& t, const DistAdd& s) {
    TermPtr l, r;
    int n = dist_dim(ctx, s.left, "Distribution Addition", l);
    int m = dist_dim(ctx, s.right, "Distribution Addition", r);
    if (n != m) mismatch(s.right, "Distribution Addition", "Dist(" + vec(n) + ")", dist_type(m));
    return {dist_type(n), rebuilt(t, DistAdd{l, r})};
  }

  Elaborated synth_node(const Ctx& ctx, const TermPtr& t, const ScalarMul& m) {
    Elaborated s = check(ctx, m.scalar, real_type(), "Scalar Multiplication");
    TermPtr d;
    int n = dist_dim(ctx, m.dist, "Scalar Multiplication", d);
    return {dist_type(n), rebuilt(t, ScalarMul{s.term, d})};
  }

  Elaborated synth_node(const Ctx& ctx, const TermPtr& t, const DistApply& a) {
    TermPtr d;
    int n = dist_dim(ctx, a.dist, "Distribution Application", d);
    Elaborated phi = check(ctx, a.test, test_type(n), "Distribution Application");
    return {real_type(), rebuilt(t, DistApply{d, phi.term})};
  }

  Elaborated synth_node(const Ctx& ctx, const TermPtr& t, const Bump& b) {
    Elaborated c = check(ctx, b.center, real_vector_type(b.dim), "Bump Function");
    Elaborated r = check(ctx, b.radius, pos_real_type(), "Bump Function");
    return {test_type(b.dim), rebuilt(t, Bump{b.dim, c.term, r.term})};
  }

  Elaborated synth_node(const Ctx&, const TermPtr& t, const Plateau& p) {
    if (!p.inner.valid() || !p.outer.valid() || p.inner.dim() != p.outer.dim())
      throw TypeError(TypeErrorKind::Mismatch, t->span, "Plateau Function",
                      "inner and outer boxes must be valid boxes of equal dimension");
    if (!p.inner.strictly_inside(p.outer))
      throw TypeError(TypeErrorKind::Mismatch, t->span, "Plateau Function",
                      "inner box " + to_string(p.inner) + " is not strictly inside " +
                          to_string(p.outer));
    return {test_type(p.inner.dim()), t};
  }

  Elaborated synth_node(const Ctx& ctx, const TermPtr& t, const Dirac& d) {
    Elaborated p;
    if (as<Pair>(d.point) || as<NatLit>(d.point) || as<RealLit>(d.point)) {
      p = check(ctx, d.point, real_vector_type(tuple_width(d.point)), "Dirac delta");
    } else {
      p = synth(ctx, d.point);
    }
    auto n = real_vector_dim(*p.type);
    if (!n) mismatch(d.point, "Dirac delta", "R^n", p.type);
    return {dist_type(*n), rebuilt(t, Dirac{p.term})};
  }

  Elaborated synth_node(const Ctx& ctx, const TermPtr& t, const Iter& it) {
    Elaborated step = synth(ctx, it.step);
    if (step.type->kind != TypeKind::Arrow || !type_equal(step.type->left, step.type->right))
      mismatch(it.step, "Iteration", "a function of type T -> T", step.type);
    TypePtr tau = step.type->left;
    Elaborated seed = check(ctx, it.seed, tau, "Iteration");
    return {arrow_type(nat_type(), tau), rebuilt(t, Iter{seed.term, step.term})};
  }

  Elaborated synth_node(const Ctx& ctx, const TermPtr& t, const Arith& a) {
    std::vector<Elaborated> args;
    for (const auto& x : a.args) args.push_back(synth(ctx, x));
    bool all_nat = true, all_num = true;
    for (const auto& e : args) {
      all_nat = all_nat && e.type->kind == TypeKind::Nat;
      all_num = all_num && (is_real_like(e.type) || e.type->kind == TypeKind::Nat);
    }
    if (all_nat && nat_op(a.op)) {
      std::vector<TermPtr> terms;
      for (auto& e : args) terms.push_back(e.term);
      return {nat_type(), rebuilt(t, Arith{a.op, std::move(terms), a.exponent})};
    }
    if (!all_num || all_nat) {
      for (std::size_t i = 0; i < args.size(); ++i)
        if (!is_real_like(args[i].type) && !as<NatLit>(a.args[i]))
          mismatch(a.args[i], "Arithmetic",
                   all_nat ? std::string("R (operator ") + op_name(a.op) + " is not defined on N)"
                           : "R",
                   args[i].type);
    }
    if (a.op == ArithOp::Min || a.op == ArithOp::Max) min_max_on_reals(t, a.op);
    // Real arithmetic; natural literals are read as reals, natural
    // variables are rejected.
    std::vector<TermPtr> terms;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i].type->kind == TypeKind::Nat) {
        if (!as<NatLit>(a.args[i])) mismatch(a.args[i], "Arithmetic", "R", args[i].type);
        terms.push_back(check(ctx, a.args[i], real_type(), "Arithmetic").term);
      } else {
        terms.push_back(args[i].term);
      }
    }
    return {real_type(), rebuilt(t, Arith{a.op, std::move(terms), a.exponent})};
  }

  Elaborated synth_node(const Ctx&, const TermPtr& t, const Compare&) {
    throw TypeError(TypeErrorKind::Mismatch, t->span, "Comparison",
                    "comparisons are only allowed inside predicate literals");
  }
  Elaborated synth_node(const Ctx&, const TermPtr& t, const Logic&) {
    throw TypeError(TypeErrorKind::Mismatch, t->span, "Predicate",
                    "boolean connectives are only allowed inside predicate literals");
  }
  Elaborated synth_node(const Ctx&, const TermPtr& t, const BoolLit&) {
    throw TypeError(TypeErrorKind::Mismatch, t->span, "Predicate",
                    "boolean literals are only allowed inside predicate literals");
  }

  Elaborated synth_node(const Ctx& ctx, const TermPtr& t, const PredLit& p) {
    Ctx inner = ctx;
    if (p.vars.size() == 1 && p.dim == 1) {
      inner = inner.extend(p.vars[0], real_type());
    } else if (static_cast<int>(p.vars.size()) == p.dim) {
      for (const auto& v : p.vars) inner = inner.extend(v, real_type());
    } else {
      throw TypeError(TypeErrorKind::Mismatch, t->span, "Predicate",
                      "predicate over " + vec(p.dim) + " must name " +
                          std::to_string(p.dim) + " coordinates");
    }
    TermPtr body = pred_body(inner, p.body);
    return {pred_type(p.dim), rebuilt(t, PredLit{p.vars, p.dim, body})};
  }

  TermPtr pred_body(const Ctx& ctx, const TermPtr& t) {
    if (as<BoolLit>(t)) return t;
    if (const auto* l = as<Logic>(t)) {
      std::vector<TermPtr> args;
      for (const auto& a : l->args) args.push_back(pred_body(ctx, a));
      return rebuilt(t, Logic{l->op, std::move(args)});
    }
    if (const auto* c = as<Compare>(t))
      return rebuilt(t, Compare{c->op, pred_arith(ctx, c->lhs), pred_arith(ctx, c->rhs)});
    throw TypeError(TypeErrorKind::Mismatch, t->span, "Predicate",
                    "predicate body must be a comparison or a boolean combination of comparisons");
  }

  /// Arithmetic over real variables and literals only.
  TermPtr pred_arith(const Ctx& ctx, const TermPtr& t) {
    if (const auto* v = as<Var>(t)) {
      TypePtr ty = ctx.lookup(v->name);
      if (!ty)
        throw TypeError(TypeErrorKind::UnboundVariable, t->span, "Variable",
                        "unbound variable " + v->name);
      if (!is_real_like(ty)) mismatch(t, "Comparison", "R", ty);
      return t;
    }
    if (as<RealLit>(t)) return t;
    if (const auto* n = as<NatLit>(t)) return rebuilt(t, RealLit{static_cast<double>(n->value)});
    if (const auto* a = as<Arith>(t)) {
      std::vector<TermPtr> args;
      for (const auto& x : a->args) args.push_back(pred_arith(ctx, x));
      if (a->op == ArithOp::Min || a->op == ArithOp::Max) min_max_on_reals(t, a->op);
      return rebuilt(t, Arith{a->op, std::move(args), a->exponent});
    }
    throw TypeError(TypeErrorKind::Mismatch, t->span, "Comparison",
                    "comparison operands must be arithmetic over real variables");
  }
};

}  // namespace

TypePtr check(const Ctx& ctx, const TermPtr& t) { return Checker().synth(ctx, t).type; }

Elaborated elaborate(const Ctx& ctx, const TermPtr& t) { return Checker().synth(ctx, t); }

Elaborated elaborate(const Ctx& ctx, const TermPtr& t, const TypePtr& expected) {
  return Checker().check(ctx, t, expected, "Definition");
}

std::vector<TypedDefinition> check_program(const SourceFile& src, const Ctx& ctx) {
  std::vector<TypedDefinition> out;
  Ctx cur = ctx;
  for (const auto& d : src.definitions) {
    Elaborated e = d.annot ? elaborate(cur, d.body, d.annot) : elaborate(cur, d.body);
    out.push_back({d.name, e.type, e.term});
    cur = cur.extend(d.name, e.type);
  }
  return out;
}

}  // namespace ldelta
