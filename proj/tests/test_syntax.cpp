#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "gen.hpp"
#include "ldelta/parser.hpp"
#include "ldelta/syntax.hpp"

using namespace ldelta;
using namespace ldelta::terms;

namespace {

std::set<std::string> S(std::initializer_list<const char*> xs) {
  std::set<std::string> out;
  for (const char* x : xs) out.insert(x);
  return out;
}

}  // namespace

TEST_CASE("free variables of a closed lambda") {
  CHECK(free_vars(lam("x", real_type(), var("x"))).empty());
}

TEST_CASE("free variables of an indicator with variable subterms") {
  CHECK(free_vars(ind(var("p"), var("f"))) == S({"p", "f"}));
}

TEST_CASE("let shadows its bound name") {
  TermPtr t = let("x", var("y"), arith(ArithOp::Add, {var("x"), var("x")}));
  CHECK(free_vars(t) == S({"y"}));
}

TEST_CASE("let-pair and predicate literals bind their names") {
  CHECK(free_vars(let_pair("a", "b", var("c"), pair(var("a"), var("b")))) == S({"c"}));
  TermPtr p = terms::pred({"x"}, 1, cmp(CmpOp::Lt, var("x"), var("k")));
  CHECK(free_vars(p) == S({"k"}));
}

TEST_CASE("substitution renames a binder that would capture") {
  TermPtr t = substitute(lam("y", real_type(), var("x")), "x", var("y"));
  const auto* l = as<node::Lam>(t);
  REQUIRE(l);
  CHECK(l->param == "y'");
  CHECK(alpha_equal(t, lam("y'", real_type(), var("y"))));
  CHECK(print(t) == "fun y': R -> y");
}

TEST_CASE("substitution of a variable by a literal") {
  CHECK(alpha_equal(substitute(var("x"), "x", real(3.0)), real(3.0)));
}

TEST_CASE("substitution into a sum") {
  TermPtr t = substitute(arith(ArithOp::Add, {var("x"), var("z")}), "z", var("x"));
  CHECK(alpha_equal(t, arith(ArithOp::Add, {var("x"), var("x")})));
}

TEST_CASE("substitution stops at a shadowing binder") {
  TermPtr t = lam("x", real_type(), var("x"));
  CHECK(alpha_equal(substitute(t, "x", real(1.0)), t));
}

TEST_CASE("alpha equivalence ignores bound names only") {
  CHECK(alpha_equal(lam("x", real_type(), var("x")), lam("y", real_type(), var("y"))));
  CHECK_FALSE(alpha_equal(lam("x", real_type(), var("z")), lam("y", real_type(), var("w"))));
  CHECK_FALSE(alpha_equal(lam("x", real_type(), var("x")), lam("x", nat_type(), var("x"))));
}

TEST_CASE("vector types print as R^n and are right-nested products") {
  CHECK(to_string(real_vector_type(1)) == "R");
  CHECK(to_string(real_vector_type(3)) == "R^3");
  CHECK(type_equal(real_vector_type(3), prod_type(real_type(), prod_type(real_type(), real_type()))));
  CHECK(real_vector_dim(*real_vector_type(4)) == 4);
  CHECK_FALSE(real_vector_dim(*prod_type(nat_type(), real_type())).has_value());
  CHECK(to_string(arrow_type(real_type(), arrow_type(real_type(), dist_type(2)))) == "R -> R -> Dist(R^2)");
  CHECK(to_string(arrow_type(arrow_type(real_type(), real_type()), real_type())) == "(R -> R) -> R");
}

TEST_CASE("property: substitution lemma") {
  gen::Rng rng(7);
  for (int i = 0; i < 500; ++i) {
    TermPtr t = gen::term(rng, 4);
    TermPtr s = gen::term(rng, 2);
    std::string x = gen::name(rng);
    std::set<std::string> lhs = free_vars(substitute(t, x, s));
    std::set<std::string> rhs = free_vars(t);
    rhs.erase(x);
    for (const auto& v : free_vars(s)) rhs.insert(v);
    CHECK(std::includes(rhs.begin(), rhs.end(), lhs.begin(), lhs.end()));
  }
}

TEST_CASE("property: substituting a fresh variable and back is the identity") {
  gen::Rng rng(11);
  for (int i = 0; i < 300; ++i) {
    TermPtr t = gen::term(rng, 4);
    std::string x = gen::name(rng);
    TermPtr there = substitute(t, x, var("fresh"));
    CHECK(alpha_equal(substitute(there, "fresh", var(x)), t));
  }
}
