// Acceptance run: one PASS/FAIL line per criterion.  With no argument every
// criterion runs; with a number only that one does.  The exit status is 1
// when any criterion that ran failed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "gen.hpp"
#include "ldelta/error.hpp"
#include "ldelta/prelude.hpp"
#include "ldelta/scene.hpp"

using namespace ldelta;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

const Prelude& base_prelude() {
  static const Prelude p = make_prelude();
  return p;
}

/// Evaluates `defs` followed by `main = term` and returns the main value.
ValuePtr value_of(const std::string& defs, const std::string& term, const Prelude& p = base_prelude()) {
  return run_program(check_source(defs + "\nmain = " + term + ";", p), p, QuadConfig{}).value;
}

double real_of(const std::string& defs, const std::string& term, const Prelude& p = base_prelude()) {
  return as_real(value_of(defs, term, p));
}

// The unit bump, written out here so the oracles do not share code with
// the library.
double bump_value(double c, double r, double x) {
  double u = (x - c) / r;
  return std::abs(u) < 1 ? std::exp(-1 / (1 - u * u)) : 0.0;
}

std::string lit(double v) { return format_real(v); }

// -- criteria ---------------------------------------------------------------

Verdict relu_half() {
  const std::string relu = "relu : Dist(R^1) = ind (pred(x: R){ x >= 0 }) (fun x: R -> x);";
  bool ok = true;
  std::string d;
  for (double eps : {0.5, 0.1, 0.05}) {
    double v = real_of(relu, "der relu 0.0 " + lit(eps));
    ok = ok && std::abs(v - 0.5) <= 1e-3;
    d += "eps " + fmt(eps) + " -> " + fmt(v) + "; ";
  }
  return {ok, d};
}

Verdict heaviside_delta() {
  const std::string h = "h : Dist(R^1) = ind (pred(x: R){ x >= 0 }) (fun x: R -> 1.0);";
  gen::Rng rng(1001);
  double worst = 0;
  for (int i = 0; i < 20; ++i) {
    double c = gen::uniform(rng, -0.5, 0.5), r = gen::uniform(rng, 0.5, 2);
    double v = real_of(h, "< d/d1 h, bump1(" + lit(c) + ", " + lit(r) + ") >");
    worst = std::max(worst, std::abs(v - bump_value(c, r, 0)));
  }
  return {worst <= 1e-5, "max |<H', phi> - phi(0)| = " + fmt(worst) + " over 20 bumps"};
}

// A random one-dimensional predicate over x with no division.
std::string random_pred_body(gen::Rng& rng, int depth) {
  auto atom = [&] {
    double a = gen::uniform(rng, -1.5, 1.5), b = gen::uniform(rng, 0.1, 1.5);
    switch (gen::pick(rng, 4)) {
      case 0: return "x < " + lit(a);
      case 1: return "x >= " + lit(a);
      case 2: return "x * x < " + lit(b);
      default: return lit(a) + " < x < " + lit(a + b);
    }
  };
  if (depth <= 0) return atom();
  switch (gen::pick(rng, 4)) {
    case 0: return "(" + random_pred_body(rng, depth - 1) + ") and (" + random_pred_body(rng, depth - 1) + ")";
    case 1: return "(" + random_pred_body(rng, depth - 1) + ") or (" + random_pred_body(rng, depth - 1) + ")";
    case 2: return "not (" + random_pred_body(rng, depth - 1) + ")";
    default: return atom();
  }
}

Verdict conditional_coherence() {
  gen::Rng rng(1003);
  int failures = 0;
  double worst_ratio = 0;
  for (int i = 0; i < 50; ++i) {
    std::string body = random_pred_body(rng, 2);
    std::string f = "(fun x: R -> " + print(gen::real_term(rng, 3, {"x"})) + ")";
    std::string phi = "bump1(" + lit(gen::uniform(rng, -1, 1)) + ", " + lit(gen::uniform(rng, 0.2, 1.5)) + ")";
    std::string defs = "f : R -> R = " + f + ";\n"
                       "split : Dist(R^1) = ind (pred(x: R){ " + body + " }) f +. ind (pred(x: R){ not (" + body + ") }) f;\n"
                       "whole : Dist(R^1) = lift f;\n"
                       "phi : Test(R^1) = " + phi + ";";
    ValuePtr split = value_of(defs, "split"), whole = value_of(defs, "whole"), test = value_of(defs, "phi");
    PairResult a = pair_detailed(*as_dist(split), as_test(test));
    PairResult b = pair_detailed(*as_dist(whole), as_test(test));
    double diff = std::abs(a.value - b.value), bound = 2 * (a.error_estimate + b.error_estimate);
    if (!(diff <= bound)) {
      ++failures;
      std::fprintf(stderr, "  coherence: pred { %s } f %s: diff %s > bound %s\n", body.c_str(), f.c_str(),
                   fmt(diff).c_str(), fmt(bound).c_str());
    }
    if (bound > 0) worst_ratio = std::max(worst_ratio, diff / bound);
  }
  return {failures == 0, std::to_string(50 - failures) + "/50 triples within 2x the error estimate (worst ratio " +
                             fmt(worst_ratio) + ")"};
}

Verdict smooth_compatibility() {
  struct Case {
    const char* f;
    const char* df;
  };
  const Case cases[] = {{"x * x", "2 * x"},
                        {"x ^ 5", "5 * x ^ 4"},
                        {"sin x", "cos x"},
                        {"exp x", "exp x"}};
  gen::Rng rng(1004);
  double worst = 0;
  for (const auto& c : cases) {
    for (int i = 0; i < 10; ++i) {
      std::string phi = "bump1(" + lit(gen::uniform(rng, -1, 1)) + ", " + lit(gen::uniform(rng, 0.2, 1.5)) + ")";
      double lhs = real_of("", "< d/d1 (lift (fun x: R -> " + std::string(c.f) + ")), " + phi + " >");
      double rhs = real_of("", "< lift (fun x: R -> " + std::string(c.df) + "), " + phi + " >");
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return {worst <= 2e-6, "max |<(lift f)', phi> - <lift f', phi>| = " + fmt(worst) + " over 40 pairings"};
}

Verdict jump_theorem() {
  gen::Rng rng(1005);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    int jumps = 1 + gen::pick(rng, 4);
    std::vector<double> at(jumps);
    for (auto& a : at) a = gen::uniform(rng, -1.5, 1.5);
    std::sort(at.begin(), at.end());
    std::vector<double> slope(jumps + 1), offset(jumps + 1);
    for (int k = 0; k <= jumps; ++k) {
      slope[k] = gen::uniform(rng, -2, 2);
      offset[k] = gen::uniform(rng, -2, 2);
    }
    // Piece k covers [at[k-1], at[k]).
    auto region = [&](int k) {
      if (k == 0) return "x < " + lit(at[0]);
      if (k == jumps) return "x >= " + lit(at[jumps - 1]);
      return lit(at[k - 1]) + " <= x < " + lit(at[k]);
    };
    std::string f, df;
    for (int k = 0; k <= jumps; ++k) {
      std::string ind = "ind (pred(x: R){ " + region(k) + " }) ";
      f += (k ? " +. " : "") + ind + "(fun x: R -> " + lit(slope[k]) + " * x + " + lit(offset[k]) + ")";
      df += (k ? " +. " : "") + ind + "(fun x: R -> " + lit(slope[k]) + ")";
    }
    double c = gen::uniform(rng, -1, 1), r = gen::uniform(rng, 0.5, 2);
    std::string phi = "bump1(" + lit(c) + ", " + lit(r) + ")";
    double lhs = real_of("f : Dist(R^1) = " + f + ";", "< d/d1 f, " + phi + " >");
    double smooth = real_of("df : Dist(R^1) = " + df + ";", "< df, " + phi + " >");
    double deltas = 0;
    for (int k = 0; k < jumps; ++k) {
      double jump = (slope[k + 1] * at[k] + offset[k + 1]) - (slope[k] * at[k] + offset[k]);
      deltas += jump * bump_value(c, r, at[k]);
    }
    worst = std::max(worst, std::abs(lhs - (smooth + deltas)));
  }
  return {worst <= 1e-5, "max |<f', phi> - (<f'_smooth, phi> + sum J phi(a))| = " + fmt(worst) + " over 100 functions"};
}

const char* kCoin =
    "area : R -> R = fun p: R -> < ind (pred(x: R){ 0 < x < p }) (fun x: R -> 1.0), plateau([0, 1], [-1, 2]) >;";

Verdict coin_flip() {
  bool ok = true;
  std::string d;
  for (double p : {0.25, 0.5, 0.75}) {
    double v = real_of(kCoin, "der (lift area) " + lit(p) + " 0.1");
    ok = ok && std::abs(v - 1) <= 1e-3;
    d += "p0 " + fmt(p) + " -> " + fmt(v) + "; ";
  }
  return {ok, d};
}

const char* kBall =
    "v = 1.0;\n"
    "twall = 1.0;\n"
    "u : Dist(R^1) = ind (pred(t: R){ t <= twall }) (fun t: R -> v) +. ind (pred(t: R){ t > twall }) (fun t: R -> -v);";

Verdict bouncing_ball() {
  double v = real_of(kBall, "der u twall 0.1");
  double psi = real_of("", "< dirac 1.0, bump1(1.0, 0.1) > / < lift (fun t: R -> 1.0), bump1(1.0, 0.1) >");
  double coefficient = v / psi;
  bool ok = std::abs(v - (-2.0)) <= 1e-2;
  return {ok, "value " + fmt(v) + " (target -2.0 +- 1e-2); jump coefficient <du/dt, psi>/psi(twall) = " +
                  fmt(coefficient) + " = -2v; psi(twall) = " + fmt(psi)};
}

const char* kSilly =
    "s1 : Dist(R^1) = ind (pred(x: R){ x >= 0 }) (fun x: R -> x) +. (-1.0) *. ind (pred(x: R){ x < 0 }) (fun x: R -> -x);\n"
    "s2 : Dist(R^1) = ind (pred(x: R){ x > 0 }) (fun x: R -> x) +. (-1.0) *. ind (pred(x: R){ x <= 0 }) (fun x: R -> -x);\n"
    "s3 : Dist(R^1) = ind (pred(x: R){ x >= 0 }) (fun x: R -> x) +. (-1.0) *. ind (pred(x: R){ x <= 0 }) (fun x: R -> -x);";

Verdict silly_id() {
  bool ok = true;
  std::string d;
  for (const char* s : {"s1", "s2", "s3"}) {
    double v = real_of(kSilly, "der " + std::string(s) + " 0.0 0.1");
    ok = ok && std::abs(v - 1) <= 1e-3;
    d += std::string(s) + " -> " + fmt(v) + "; ";
  }
  return {ok, d};
}

Verdict ray_tracing() {
  auto start = std::chrono::steady_clock::now();
  Prelude half = make_prelude(load_scene(LDELTA_SOURCE_DIR "/scenes/halfplane.scene"));
  Prelude tri = make_prelude(load_scene(LDELTA_SOURCE_DIR "/scenes/triangle.scene"));
  bool ok = true;
  std::string d = "halfplane dI:";
  for (double phi : {0.25, 0.5, 0.75}) {
    double v = real_of("", "der (lift I) " + lit(phi) + " 0.05", half);
    ok = ok && std::abs(v - 1) <= 1e-3;
    d += " " + fmt(v);
  }
  d += "; triangle dI vs FD:";
  for (double phi : {0.25, 0.5, 0.75}) {
    double v = real_of("", "der (lift I) " + lit(phi) + " 0.05", tri);
    double fd = (real_of("", "I " + lit(phi + 1e-3), tri) - real_of("", "I " + lit(phi - 1e-3), tri)) / 2e-3;
    ok = ok && std::abs(v - fd) <= 5e-3;
    d += " " + fmt(v) + "/" + fmt(fd);
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  ok = ok && secs <= 60;
  return {ok, d + "; " + fmt(secs) + " s"};
}

Verdict localization() {
  double prev = INFINITY;
  bool ok = true;
  std::string d;
  for (double eps : {0.5, 0.1, 0.02}) {
    std::string e = lit(eps);
    double v = real_of("", "< lift (fun x: R -> x * x + 1), bump1(1.0, " + e + ") > / < lift (fun x: R -> 1.0), bump1(1.0, " + e + ") >");
    double err = std::abs(v - 2);
    ok = ok && err < prev;
    prev = err;
    d += "eps " + fmt(eps) + " err " + fmt(err) + "; ";
  }
  ok = ok && prev < 1e-3;
  return {ok, d};
}

Verdict gradient_descent() {
  double x = real_of("", "gradDescLr (lift (fun x: R -> (x - 3.0)^2)) 0.0 0.05 0.1 200");
  return {std::abs(x - 3) < 1e-2, "x_final = " + fmt(x)};
}

std::string rendered_error(const std::string& file, const std::string& text) {
  try {
    check_source(text, base_prelude());
  } catch (const TypeError& e) {
    return render(file, e);
  } catch (const ParseError& e) {
    return render(file, e);
  }
  return "<accepted>";
}

Verdict type_golden() {
  struct Positive {
    const char* rule;
    const char* term;
    const char* type;
  };
  const Positive positives[] = {
      {"Variable", "let r = 1.0 in r", "R"},
      {"Unpair", "let (a, b) = (1.0, 2) in b", "N"},
      {"Application", "(fun x: R -> x) 1.0", "R"},
      {"Lift", "lift (fun x: R -> x)", "Dist(R^1)"},
      {"Indicator Function", "ind (pred(x: R){ x >= 0 }) (fun x: R -> x)", "Dist(R^1)"},
      {"Differentiation", "d/d2 (lift (fun v: R^2 -> 1.0))", "Dist(R^2)"},
      {"Distribution Addition", "dirac 0.0 +. lift (fun x: R -> x)", "Dist(R^1)"},
      {"Scalar Multiplication", "2.0 *. dirac 0.0", "Dist(R^1)"},
      {"Distribution Application", "< dirac 0.0, bump1(0.0, 1.0) >", "R"},
      {"Bump Function", "bump2((0.0, 0.0), 1.0)", "Test(R^2)"},
      {"Plateau Function", "plateau([0, 1], [-1, 2])", "Test(R^1)"},
      {"Dirac delta", "dirac (1.0, 2.0)", "Dist(R^2)"},
      {"Iteration", "iter 0 (fun n: N -> n + 1)", "N -> N"},
      {"Arithmetic", "exp 1.0 + sin 2.0 * 3", "R"},
      {"Predicate", "pred(x, y: R^2){ x < y }", "Pred(R^2)"},
      {"Definition", "der", "Dist(R^1) -> R -> R+ -> R"},
  };
  int good = 0;
  std::string d;
  for (const auto& p : positives) {
    std::string got;
    try {
      got = to_string(run_program(check_source(std::string("main = ") + p.term + ";", base_prelude()), base_prelude(),
                                  QuadConfig{})
                          .type);
    } catch (const Error& e) {
      got = e.what();
    }
    if (got == p.type)
      ++good;
    else
      d += std::string(p.rule) + " gave " + got + "; ";
  }
  struct Negative {
    const char* text;
    const char* rendering;
  };
  const Negative negatives[] = {
      {"inner : Dist(R^1) = ind (pred(x: R){ x > 0 }) (fun x: R -> 1.0);\n"
       "main = ind (pred(x: R){ x < 1 }) (fun x: R -> inner);",
       "g.ld:2:47: [Indicator Function] expected R, found Dist(R^1)"},
      {"main = d/d2 (lift (fun x: R -> x));", "g.ld:1:8: [Differentiation] index 2 out of range for Dist(R^1)"},
      {"main = < lift (fun x: R -> x), 1.0 >;", "g.ld:1:32: [Distribution Application] expected Test(R^1), found R"},
  };
  int rejected = 0;
  for (const auto& n : negatives) {
    std::string got = rendered_error("g.ld", n.text);
    if (got == n.rendering && got == rendered_error("g.ld", n.text))
      ++rejected;
    else
      d += "got '" + got + "' want '" + n.rendering + "'; ";
  }
  std::size_t total = std::size(positives);
  bool ok = good == static_cast<int>(total) && rejected == 3;
  return {ok, std::to_string(good) + "/" + std::to_string(total) + " rules accepted, " + std::to_string(rejected) +
                  "/3 rejections rendered exactly" + (d.empty() ? "" : "; " + d)};
}

struct Criterion {
  const char* name;
  std::function<Verdict()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> c = {
      {"ReLU half-derivative", relu_half},
      {"Heaviside delta", heaviside_delta},
      {"conditional coherence", conditional_coherence},
      {"smooth compatibility", smooth_compatibility},
      {"piecewise jump theorem", jump_theorem},
      {"coin-flip derivative of integral", coin_flip},
      {"bouncing ball", bouncing_ball},
      {"sillyID consistency", silly_id},
      {"ray-tracing edge gradient", ray_tracing},
      {"localization", localization},
      {"gradient descent", gradient_descent},
      {"type-system golden suite", type_golden},
  };
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  int only = argc > 1 ? std::atoi(argv[1]) : 0;
  if (argc > 1 && (only < 1 || only > static_cast<int>(criteria().size()))) {
    std::fprintf(stderr, "usage: acceptance [1-%zu]\n", criteria().size());
    return 64;
  }
  int failed = 0;
  for (std::size_t i = 0; i < criteria().size(); ++i) {
    if (only && static_cast<int>(i) + 1 != only) continue;
    const Criterion& c = criteria()[i];
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    std::printf("%2zu %-34s %s  %s\n", i + 1, c.name, v.pass ? "PASS" : "FAIL", v.detail.c_str());
    std::fflush(stdout);
    if (!v.pass) ++failed;
  }
  return failed ? 1 : 0;
}
