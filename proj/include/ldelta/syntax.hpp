#pragma once

// Abstract syntax of the language: types, terms and predicate bodies.
//
// Terms are immutable and shared through `TermPtr`.  Every term carries the
// span of source text it was parsed from; terms built programmatically carry
// an empty span.

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "ldelta/box.hpp"
#include "ldelta/error.hpp"

namespace ldelta {

// ---------------------------------------------------------------------------
// Types

enum class TypeKind { Real, PosReal, Nat, Pred, Test, Dist, Prod, Arrow };

struct Type;
using TypePtr = std::shared_ptr<const Type>;

struct Type {
  TypeKind kind;
  int dim = 0;       // Pred / Test / Dist
  TypePtr left;      // Prod: left factor, Arrow: domain
  TypePtr right;     // Prod: right factor, Arrow: codomain
};

TypePtr real_type();
TypePtr pos_real_type();
TypePtr nat_type();
TypePtr pred_type(int dim);
TypePtr test_type(int dim);
TypePtr dist_type(int dim);
TypePtr prod_type(TypePtr left, TypePtr right);
TypePtr arrow_type(TypePtr domain, TypePtr codomain);
/// R^1 = R, R^{n+1} = R x R^n.
TypePtr real_vector_type(int n);

bool type_equal(const Type& a, const Type& b);
inline bool type_equal(const TypePtr& a, const TypePtr& b) {
  return type_equal(*a, *b);
}

/// n if `t` is R^n in the right-nested product encoding.
std::optional<int> real_vector_dim(const Type& t);

std::string to_string(const Type& t);
inline std::string to_string(const TypePtr& t) { return to_string(*t); }

// ---------------------------------------------------------------------------
// Terms

enum class ArithOp { Add, Sub, Mul, Div, Neg, Pow, Exp, Log, Sin, Cos, Sqrt, Min, Max };
enum class CmpOp { Lt, Le, Gt, Ge, Eq, Ne };
enum class LogicOp { And, Or, Not };

const char* op_name(ArithOp op);
const char* op_name(CmpOp op);
const char* op_name(LogicOp op);
int arity(ArithOp op);

struct Term;
using TermPtr = std::shared_ptr<const Term>;

namespace node {

struct Var { std::string name; };
struct RealLit { double value; };
struct NatLit { std::uint64_t value; };
struct Pair { TermPtr first, second; };
struct LetPair { std::string first, second; TermPtr bound, body; };
struct Let { std::string name; TermPtr bound, body; };
struct Lam { std::string param; TypePtr annot; TermPtr body; };
struct App { TermPtr fn, arg; };
struct Lift { TermPtr fn; };
struct Indicator { TermPtr pred, fn; };
struct PartialDeriv { int index; TermPtr dist; };
struct DistAdd { TermPtr left, right; };
struct ScalarMul { TermPtr scalar, dist; };
struct DistApply { TermPtr dist, test; };
struct Bump { int dim; TermPtr center, radius; };
struct Plateau { Box inner, outer; };
struct Dirac { TermPtr point; };
struct Iter { TermPtr seed, step; };
/// `exponent` is only meaningful for ArithOp::Pow.
struct Arith { ArithOp op; std::vector<TermPtr> args; int exponent = 0; };
struct Compare { CmpOp op; TermPtr lhs, rhs; };
struct Logic { LogicOp op; std::vector<TermPtr> args; };
struct BoolLit { bool value; };
/// `vars` names either the single coordinate (dim 1) or each coordinate in
/// order (dim n).
struct PredLit { std::vector<std::string> vars; int dim; TermPtr body; };

}  // namespace node

using TermNode =
    std::variant<node::Var, node::RealLit, node::NatLit, node::Pair,
                 node::LetPair, node::Let, node::Lam, node::App, node::Lift,
                 node::Indicator, node::PartialDeriv, node::DistAdd,
                 node::ScalarMul, node::DistApply, node::Bump, node::Plateau,
                 node::Dirac, node::Iter, node::Arith, node::Compare,
                 node::Logic, node::BoolLit, node::PredLit>;

struct Term {
  TermNode node;
  Span span;
};

template <class Node>
TermPtr make_term(Node n, Span span = {}) {
  return std::make_shared<const Term>(Term{TermNode(std::move(n)), span});
}

template <class Node>
const Node* as(const TermPtr& t) {
  return std::get_if<Node>(&t->node);
}

/// Short constructors, mostly for tests and the prelude.
namespace terms {
TermPtr var(std::string name);
TermPtr real(double v);
TermPtr nat(std::uint64_t v);
TermPtr pair(TermPtr a, TermPtr b);
TermPtr let(std::string x, TermPtr bound, TermPtr body);
TermPtr let_pair(std::string x, std::string y, TermPtr bound, TermPtr body);
TermPtr lam(std::string x, TypePtr annot, TermPtr body);
TermPtr app(TermPtr fn, TermPtr arg);
TermPtr app(TermPtr fn, std::initializer_list<TermPtr> args);
TermPtr lift(TermPtr fn);
TermPtr ind(TermPtr pred, TermPtr fn);
TermPtr deriv(int index, TermPtr dist);
TermPtr dist_add(TermPtr a, TermPtr b);
TermPtr scalar_mul(TermPtr s, TermPtr d);
TermPtr apply(TermPtr dist, TermPtr test);
TermPtr bump(int dim, TermPtr center, TermPtr radius);
TermPtr plateau(Box inner, Box outer);
TermPtr dirac(TermPtr point);
TermPtr iter(TermPtr seed, TermPtr step);
TermPtr arith(ArithOp op, std::vector<TermPtr> args);
TermPtr pow(TermPtr base, int exponent);
TermPtr cmp(CmpOp op, TermPtr lhs, TermPtr rhs);
TermPtr logic(LogicOp op, std::vector<TermPtr> args);
TermPtr boolean(bool v);
TermPtr pred(std::vector<std::string> vars, int dim, TermPtr body);
}  // namespace terms

std::set<std::string> free_vars(const TermPtr& t);
bool is_free_in(const std::string& x, const TermPtr& t);

/// Capture-avoiding substitution t[x := s].  Binders that would capture a
/// free variable of `s` are renamed by appending primes.
TermPtr substitute(const TermPtr& t, const std::string& x, const TermPtr& s);

/// Equality up to renaming of bound variables; spans are ignored.
bool alpha_equal(const TermPtr& a, const TermPtr& b);

/// `base` with primes appended until it avoids every name in `avoid`.
std::string fresh_name(const std::string& base,
                       const std::set<std::string>& avoid);

}  // namespace ldelta
