#pragma once

// The typing judgment.  Checking is bidirectional: a term either synthesizes
// its type or is checked against an expected one, which is how numeric
// literals acquire the types R and R+.  Checking also returns an elaborated
// copy of the term in which every natural literal used at a real type has
// been replaced by a real literal; the evaluator consumes elaborated terms.

#include <string>
#include <utility>
#include <vector>

#include "ldelta/parser.hpp"
#include "ldelta/syntax.hpp"

namespace ldelta {

class Ctx {
 public:
  Ctx() = default;

  /// Rightmost binding of `name`, or null.
  TypePtr lookup(const std::string& name) const;
  Ctx extend(std::string name, TypePtr type) const;
  const std::vector<std::pair<std::string, TypePtr>>& entries() const { return entries_; }

 private:
  std::vector<std::pair<std::string, TypePtr>> entries_;
};

struct Elaborated {
  TypePtr type;
  TermPtr term;
};

TypePtr check(const Ctx& ctx, const TermPtr& t);
Elaborated elaborate(const Ctx& ctx, const TermPtr& t);
/// Checks `t` against `expected`.
Elaborated elaborate(const Ctx& ctx, const TermPtr& t, const TypePtr& expected);

struct TypedDefinition {
  std::string name;
  TypePtr type;
  TermPtr body;  // elaborated
};

/// Checks definitions in order, each one visible to the next.
std::vector<TypedDefinition> check_program(const SourceFile& src, const Ctx& ctx = {});

}  // namespace ldelta
