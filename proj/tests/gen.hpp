#pragma once

// Hand-rolled random generators for property tests.  Every generator takes
// the engine explicitly so a failing seed reproduces.

#include <random>
#include <string>
#include <vector>

#include "ldelta/syntax.hpp"

namespace gen {

using Rng = std::mt19937_64;

inline int pick(Rng& rng, int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }
inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline const std::vector<std::string>& names() {
  static const std::vector<std::string> n = {"x", "y", "z", "f", "g", "u"};
  return n;
}

inline std::string name(Rng& rng) { return names()[pick(rng, static_cast<int>(names().size()))]; }

/// A literal that prints and reads back exactly.
inline double literal(Rng& rng) {
  static const double pool[] = {0.0, 1.0, 0.5, 2.0, 3.25, 0.1, 1e-3, 12.0, 1.5e10};
  return pool[pick(rng, 9)];
}

inline ldelta::TypePtr type(Rng& rng, int depth) {
  using namespace ldelta;
  int k = depth <= 0 ? pick(rng, 6) : pick(rng, 8);
  switch (k) {
    case 0: return real_type();
    case 1: return pos_real_type();
    case 2: return nat_type();
    case 3: return dist_type(1 + pick(rng, 3));
    case 4: return test_type(1 + pick(rng, 3));
    case 5: return pred_type(1 + pick(rng, 2));
    case 6: return prod_type(type(rng, depth - 1), type(rng, depth - 1));
    default: return arrow_type(type(rng, depth - 1), type(rng, depth - 1));
  }
}

/// Arithmetic over the given coordinate names, for predicate bodies.
inline ldelta::TermPtr pred_arith(Rng& rng, const std::vector<std::string>& coords, int depth) {
  using namespace ldelta::terms;
  using ldelta::ArithOp;
  if (depth <= 0 || pick(rng, 3) == 0)
    return pick(rng, 2) ? var(coords[pick(rng, static_cast<int>(coords.size()))]) : real(literal(rng));
  static const ArithOp ops[] = {ArithOp::Add, ArithOp::Sub, ArithOp::Mul, ArithOp::Div};
  return arith(ops[pick(rng, 4)], {pred_arith(rng, coords, depth - 1), pred_arith(rng, coords, depth - 1)});
}

inline ldelta::TermPtr pred_body(Rng& rng, const std::vector<std::string>& coords, int depth) {
  using namespace ldelta::terms;
  using ldelta::CmpOp;
  using ldelta::LogicOp;
  int k = depth <= 0 ? 0 : pick(rng, 5);
  switch (k) {
    case 1: return logic(LogicOp::And, {pred_body(rng, coords, depth - 1), pred_body(rng, coords, depth - 1)});
    case 2: return logic(LogicOp::Or, {pred_body(rng, coords, depth - 1), pred_body(rng, coords, depth - 1)});
    case 3: return logic(LogicOp::Not, {pred_body(rng, coords, depth - 1)});
    default: {
      static const CmpOp ops[] = {CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge, CmpOp::Eq, CmpOp::Ne};
      return cmp(ops[pick(rng, 6)], pred_arith(rng, coords, 1), pred_arith(rng, coords, 1));
    }
  }
}

inline ldelta::TermPtr pred(Rng& rng) {
  int n = 1 + pick(rng, 2);
  std::vector<std::string> coords = n == 1 ? std::vector<std::string>{"x"} : std::vector<std::string>{"x", "y"};
  return ldelta::terms::pred(coords, n, pred_body(rng, coords, 2));
}

/// Syntactically well-formed terms with no regard for types.
inline ldelta::TermPtr term(Rng& rng, int depth) {
  using namespace ldelta::terms;
  using ldelta::ArithOp;
  if (depth <= 0) {
    switch (pick(rng, 3)) {
      case 0: return var(name(rng));
      case 1: return real(literal(rng));
      default: return nat(static_cast<std::uint64_t>(pick(rng, 20)));
    }
  }
  auto sub = [&] { return term(rng, depth - 1); };
  switch (pick(rng, 22)) {
    case 0: return pair(sub(), sub());
    case 1: return let(name(rng), sub(), sub());
    case 2: return let_pair(name(rng), name(rng), sub(), sub());
    case 3: return lam(name(rng), type(rng, 1), sub());
    case 4: return app(sub(), sub());
    case 5: return lift(sub());
    case 6: return ind(pred(rng), sub());
    case 7: return deriv(1 + pick(rng, 3), sub());
    case 8: return dist_add(sub(), sub());
    case 9: return scalar_mul(sub(), sub());
    case 10: return apply(sub(), sub());
    case 11: return bump(1 + pick(rng, 3), sub(), sub());
    case 12: return plateau(ldelta::Box({0.0}, {1.0}), ldelta::Box({-1.0}, {2.0}));
    case 13: return dirac(sub());
    case 14: return iter(sub(), sub());
    case 15: return arith(ArithOp::Add, {sub(), sub()});
    case 16: return arith(ArithOp::Sub, {sub(), sub()});
    case 17: return arith(ArithOp::Mul, {sub(), sub()});
    case 18: return arith(ArithOp::Div, {sub(), sub()});
    case 19: return arith(ArithOp::Neg, {sub()});
    case 20: return pow(sub(), pick(rng, 5) - 2);
    default: {
      static const ArithOp unary[] = {ArithOp::Exp, ArithOp::Log, ArithOp::Sin, ArithOp::Cos, ArithOp::Sqrt};
      static const ArithOp binary[] = {ArithOp::Min, ArithOp::Max};
      if (pick(rng, 3)) return arith(unary[pick(rng, 5)], {sub()});
      return arith(binary[pick(rng, 2)], {sub(), sub()});
    }
  }
}

/// Well-typed closed-under-`scope` terms of type R that never divide, take
/// logs or roots, so evaluation cannot fail.
inline ldelta::TermPtr real_term(Rng& rng, int depth, std::vector<std::string> scope) {
  using namespace ldelta::terms;
  using ldelta::ArithOp;
  if (depth <= 0 || pick(rng, 4) == 0) {
    if (!scope.empty() && pick(rng, 2)) return var(scope[pick(rng, static_cast<int>(scope.size()))]);
    return real(literal(rng));
  }
  switch (pick(rng, 9)) {
    case 0: return arith(ArithOp::Add, {real_term(rng, depth - 1, scope), real_term(rng, depth - 1, scope)});
    case 1: return arith(ArithOp::Sub, {real_term(rng, depth - 1, scope), real_term(rng, depth - 1, scope)});
    case 2: return arith(ArithOp::Mul, {real_term(rng, depth - 1, scope), real_term(rng, depth - 1, scope)});
    case 3: return arith(ArithOp::Neg, {real_term(rng, depth - 1, scope)});
    case 4: return arith(ArithOp::Sin, {real_term(rng, depth - 1, scope)});
    case 5: {
      std::string x = name(rng);
      ldelta::TermPtr bound = real_term(rng, depth - 1, scope);
      scope.push_back(x);
      return let(x, bound, real_term(rng, depth - 1, scope));
    }
    case 6: {
      std::string x = name(rng);
      ldelta::TermPtr arg = real_term(rng, depth - 1, scope);
      scope.push_back(x);
      return app(lam(x, ldelta::real_type(), real_term(rng, depth - 1, scope)), arg);
    }
    case 7: {
      std::string a = name(rng), b = name(rng);
      ldelta::TermPtr bound = pair(real_term(rng, depth - 1, scope), real_term(rng, depth - 1, scope));
      scope.push_back(a);
      scope.push_back(b);
      return let_pair(a, b, bound, real_term(rng, depth - 1, scope));
    }
    default: {
      std::string x = name(rng);
      ldelta::TermPtr seed = real_term(rng, depth - 1, scope);
      scope.push_back(x);
      ldelta::TermPtr step = lam(x, ldelta::real_type(),
                         arith(ArithOp::Mul, {real(0.5), real_term(rng, depth - 1, scope)}));
      return app(iter(seed, step), nat(static_cast<std::uint64_t>(pick(rng, 4))));
    }
  }
}

}  // namespace gen
