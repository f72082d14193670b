#pragma once

// Call-by-value big-step evaluator over elaborated terms.

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "ldelta/dist.hpp"
#include "ldelta/quad.hpp"
#include "ldelta/syntax.hpp"
#include "ldelta/testfn.hpp"
#include "ldelta/typecheck.hpp"

namespace ldelta {

struct Value;
using ValuePtr = std::shared_ptr<const Value>;

/// Persistent environment: extending never disturbs existing sharers.
class Env {
 public:
  Env() = default;
  Env extend(std::string name, ValuePtr value) const;
  /// Innermost binding, or null.
  ValuePtr lookup(const std::string& name) const;

 private:
  struct Node {
    std::string name;
    ValuePtr value;
    std::shared_ptr<const Node> next;
  };
  std::shared_ptr<const Node> head_;
};

using PrimImpl = std::function<ValuePtr(const std::vector<ValuePtr>&, const QuadConfig&)>;

struct VReal { double value; };
struct VNat { std::uint64_t value; };
struct VPair { ValuePtr first, second; };
struct VClosure { std::string param; TypePtr annot; TermPtr body; Env env; };
struct VPred { PredVal pred; };
struct VTest { TestFnPtr fn; };
struct VDist { DistPtr dist; };
/// Host-implemented function of `arity` curried arguments.
struct VPrim { std::string name; int arity; std::vector<ValuePtr> args; PrimImpl impl; };

struct Value {
  std::variant<VReal, VNat, VPair, VClosure, VPred, VTest, VDist, VPrim> v;
};

ValuePtr make_real(double v);
ValuePtr make_nat(std::uint64_t v);
ValuePtr make_pair(ValuePtr a, ValuePtr b);
ValuePtr make_prim(std::string name, int arity, PrimImpl impl);

double as_real(const ValuePtr& v);
std::uint64_t as_nat(const ValuePtr& v);
const DistPtr& as_dist(const ValuePtr& v);
const TestFnPtr& as_test(const ValuePtr& v);
/// Right-nested pairs of reals to a flat vector and back.
std::vector<double> flatten(const ValuePtr& v);
ValuePtr from_vector(std::span<const double> x);

ValuePtr eval(const Env& env, const TermPtr& t, const QuadConfig& cfg);
ValuePtr apply(const ValuePtr& fn, const ValuePtr& arg, const QuadConfig& cfg);
/// step applied n times to seed, as a loop.
ValuePtr iterate(const ValuePtr& seed, const ValuePtr& step, std::uint64_t n, const QuadConfig& cfg);

/// Evaluates definitions in order; each value is bound in the environment
/// seen by later ones.  Returns the extended environment.
Env eval_definitions(Env env, const std::vector<TypedDefinition>& defs, const QuadConfig& cfg,
                     std::vector<ValuePtr>* values = nullptr);

/// Printed form: reals with 12 significant digits, structures summarized.
std::string show(const ValuePtr& v);

}  // namespace ldelta
