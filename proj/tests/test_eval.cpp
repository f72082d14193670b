#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gen.hpp"
#include "ldelta/error.hpp"
#include "ldelta/eval.hpp"
#include "ldelta/prelude.hpp"
#include "ldelta/scene.hpp"

using namespace ldelta;

namespace {

constexpr double kV1 = 0.443993816168079437823;
constexpr double kEm1 = 0.367879441171442321596;
constexpr double kEm9_5 = 0.165298888221586538297;

const Prelude& default_prelude() {
  static const Prelude p = make_prelude();
  return p;
}

RunResult run_file(std::string_view text, const Prelude& prelude = default_prelude()) {
  return run_program(check_source(text, prelude), prelude, QuadConfig{});
}

/// Runs a single term as the main definition.
RunResult run(std::string_view term, const Prelude& prelude = default_prelude()) {
  return run_file("main = " + std::string(term) + ";", prelude);
}

double run_real(std::string_view text, const Prelude& prelude = default_prelude()) {
  return as_real(run(text, prelude).value);
}

std::string slurp(const std::string& rel) {
  std::ifstream in(std::string(LDELTA_SOURCE_DIR) + "/" + rel);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RuntimeError runtime_error(std::string_view text) {
  try {
    run(text);
  } catch (const RuntimeError& e) {
    return e;
  }
  FAIL("expected a runtime error for: " << text);
  return RuntimeError({}, "");
}

ValuePtr eval_closed(const TermPtr& t) { return eval(Env{}, elaborate(Ctx{}, t).term, QuadConfig{}); }

template <class F>
double simpson(F f, double a, double b, int n) {
  double h = (b - a) / n, s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4 : 2);
  return s * h / 3;
}

// Column-by-column integral of the mixed scene over the unit pixel: each
// vertical slice of a halfplane or a triangle is one interval, integrated in
// closed form; Simpson handles the outer axis.
double mixed_scene_oracle(double phi) {
  auto column = [phi](double x) {
    double total = 0;
    double top = std::clamp((0.5 + 0.4 * phi - 0.6 * x) / 0.8, 0.0, 1.0);
    total += x * x * top + top * top * top / 3;
    double vx[] = {0.2, 0.8, 0.5}, vy[] = {0.9, 0.7, 0.1 * phi};
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i < 3; ++i) {
      int j = (i + 1) % 3;
      double a = std::min(vx[i], vx[j]), b = std::max(vx[i], vx[j]);
      if (x < a || x > b || a == b) continue;
      double y = vy[i] + (vy[j] - vy[i]) * (x - vx[i]) / (vx[j] - vx[i]);
      lo = std::min(lo, y);
      hi = std::max(hi, y);
    }
    if (hi > lo) total += x * (std::clamp(hi, 0.0, 1.0) - std::clamp(lo, 0.0, 1.0));
    return total;
  };
  return simpson(column, 0, 1, 200'000);
}

}  // namespace

TEST_CASE("the ReLU program is a distribution value") {
  RunResult r = run_file("relu = ind (pred(x: R){ x >= 0 }) (fun x: R -> x); main = relu;");
  CHECK(to_string(r.type) == "Dist(R^1)");
  REQUIRE(std::holds_alternative<VDist>(r.value->v));
  CHECK(as_dist(r.value)->kind == DistExpr::Kind::Ind);
  CHECK(show(r.value).rfind("<distribution", 0) == 0);
}

TEST_CASE("Dirac deltas against bumps") {
  CHECK(run_real("< dirac 0.0, bump1(0.0, 1.0) >") == doctest::Approx(kEm1).epsilon(1e-15));
  CHECK(run_real("< dirac (2.0 / 3.0), bump1(0.0, 1.0) >") == doctest::Approx(kEm9_5).epsilon(1e-14));
  CHECK(run_real("< lift (fun x: R -> 1.0), bump1(0.0, 1.0) >") == doctest::Approx(kV1).epsilon(1e-9));
}

TEST_CASE("let-pair destructures") {
  CHECK(run_real("let (a, b) = (1.0, 2.0) in a * 10 + b") == 12);
  CHECK(show(run("(1, (2.5, 3))").value) == "(1, (2.5, 3))");
}

TEST_CASE("iteration runs a million steps as a loop") {
  RunResult r = run("iter 0 (fun n: N -> n + 1) 1000000");
  CHECK(as_nat(r.value) == 1000000);
  CHECK(run_real("iter 1.0 (fun x: R -> x / 2) 10") == doctest::Approx(1.0 / 1024));
  CHECK(as_nat(run("iter 7 (fun n: N -> n * 2) 0").value) == 7);
}

TEST_CASE("prelude examples") {
  CHECK(run_real("der (ind (pred(x: R){ x >= 0 }) (fun x: R -> x)) 0.0 0.1") == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(run_real("der (lift (fun x: R -> x * x)) 1.5 0.1") == doctest::Approx(3.0).epsilon(1e-8));
  CHECK(run_real("gradDescLr (lift (fun x: R -> (x - 3.0)^2)) 0.0 0.05 0.1 200") == doctest::Approx(3.0).epsilon(1e-6));
  // With learning rate 1 the quadratic's descent oscillates between 0 and 6.
  CHECK(run_real("gradDesc (lift (fun x: R -> (x - 3.0)^2)) 0.0 0.05 2") == doctest::Approx(0.0).epsilon(1e-6).scale(1));
}

TEST_CASE("the program corpus") {
  CHECK(as_real(run_file(slurp("programs/relu.ld")).value) == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(as_real(run_file(slurp("programs/heaviside_pair.ld")).value) == doctest::Approx(kEm1).epsilon(1e-8));
  CHECK(as_real(run_file(slurp("programs/coin.ld")).value) == doctest::Approx(1.0).epsilon(1e-6));
  double psi = kEm1 / (0.1 * kV1);
  CHECK(as_real(run_file(slurp("programs/ball.ld")).value) == doctest::Approx(-2 * psi).epsilon(1e-6));
  CHECK_THROWS_AS(run_file(slurp("programs/nested_indicator.ld")), TypeError);
}

TEST_CASE("scenes: the halfplane integral equals phi and its derivative one") {
  Prelude p = make_prelude(load_scene(std::string(LDELTA_SOURCE_DIR) + "/scenes/halfplane.scene"));
  for (double phi : {0.25, 0.5, 0.75}) {
    std::string s = format_real(phi);
    CHECK(run_real("I " + s, p) == doctest::Approx(phi).epsilon(1e-7));
    CHECK(run_real("der (lift I) " + s + " 0.05", p) == doctest::Approx(1.0).epsilon(1e-5));
  }
}

TEST_CASE("scenes: the triangle's area and its rate of change") {
  Prelude p = make_prelude(load_scene(std::string(LDELTA_SOURCE_DIR) + "/scenes/triangle.scene"));
  auto shoelace = [](double phi) {
    double x3 = 0.2 + 0.6 * phi;
    return 0.5 * std::abs((0.9 - 0.1) * (0.8 - 0.1) - (x3 - 0.1) * (0.2 - 0.1));
  };
  for (double phi : {0.05, 0.5, 0.9}) {
    std::string s = format_real(phi);
    CHECK(run_real("I " + s, p) == doctest::Approx(shoelace(phi)).epsilon(1e-4));
    CHECK(run_real("integral (charFunc " + s + ") (0.0, 0.0) (1.0, 1.0)", p) ==
          doctest::Approx(shoelace(phi)).epsilon(1e-4));
  }
  double slope = (shoelace(0.501) - shoelace(0.499)) / 0.002;
  CHECK(run_real("der (lift I) 0.5 0.05", p) == doctest::Approx(slope).epsilon(1e-3));
}

TEST_CASE("scenes: overlapping primitives with varying coefficients") {
  Prelude p = make_prelude(load_scene(std::string(LDELTA_SOURCE_DIR) + "/scenes/mixed.scene"));
  for (double phi : {0.2, 0.6}) {
    CAPTURE(phi);
    std::string s = format_real(phi);
    CHECK(run_real("I " + s, p) == doctest::Approx(mixed_scene_oracle(phi)).epsilon(1e-6));
    double h = 1e-3;
    double slope = (mixed_scene_oracle(phi + h) - mixed_scene_oracle(phi - h)) / (2 * h);
    CHECK(run_real("der (lift I) " + s + " 0.05", p) == doctest::Approx(slope).epsilon(5e-3));
  }
}

TEST_CASE("runtime errors") {
  CHECK(runtime_error("1.0 / 0.0").message() == "division by zero");
  CHECK(runtime_error("log 0.0").message() == "log of nonpositive number 0.0");
  CHECK(runtime_error("sqrt (0.0 - 1.0)").message() == "sqrt of negative number -1.0");
  CHECK(runtime_error("0.0 ^ -1").message() == "division by zero in negative power");
  CHECK(runtime_error("iter 1 (fun n: N -> n * 2) 70").message().find("overflow") != std::string::npos);
  RuntimeError e = runtime_error("let z = 0.0 in 2.0 / z");
  CHECK(render("f.ld", e).rfind("f.ld:1:23: [Runtime] ", 0) == 0);
}

TEST_CASE("values print") {
  CHECK(show(make_real(0.1)) == "0.1");
  CHECK(show(make_nat(42)) == "42");
  CHECK(show(run("fun x: R -> x").value).rfind("<function", 0) == 0);
  CHECK(show(run("bump1(0.0, 1.0)").value).rfind("<test function", 0) == 0);
  CHECK(show(run("pred(x: R){ x > 0 }").value).rfind("<predicate", 0) == 0);
  CHECK(show(run("der").value).rfind("<function", 0) == 0);
  CHECK(show(run("integral").value) == "<builtin integral>");
}

TEST_CASE("property: let and beta reduction agree with substitution") {
  gen::Rng rng(73);
  for (int i = 0; i < 300; ++i) {
    TermPtr body = gen::real_term(rng, 4, {"x"});
    TermPtr v = terms::real(gen::uniform(rng, -2, 2));
    CAPTURE(print(body));
    double substituted = as_real(eval_closed(substitute(body, "x", v)));
    CHECK(as_real(eval_closed(terms::let("x", v, body))) == substituted);
    CHECK(as_real(eval_closed(terms::app(terms::lam("x", real_type(), body), v))) == substituted);
  }
}

TEST_CASE("property: evaluation is deterministic") {
  gen::Rng rng(79);
  for (int i = 0; i < 300; ++i) {
    TermPtr t = gen::real_term(rng, 5, {});
    CHECK(as_real(eval_closed(t)) == as_real(eval_closed(t)));
  }
  std::string prog = "der (ind (pred(x: R){ x > 0.3 }) (fun x: R -> sin x)) 0.31 0.1";
  CHECK(run_real(prog) == run_real(prog));
}

TEST_CASE("property: vectors flatten and rebuild") {
  gen::Rng rng(83);
  for (int n = 1; n <= 4; ++n) {
    std::vector<double> x(n);
    for (auto& v : x) v = gen::uniform(rng, -5, 5);
    CHECK(flatten(from_vector(x)) == x);
  }
}
