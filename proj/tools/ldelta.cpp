// ldelta: check and run programs, replay the case studies as CSV, and run
// distributional gradient descent.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "ldelta/error.hpp"
#include "ldelta/parser.hpp"
#include "ldelta/prelude.hpp"
#include "ldelta/testfn.hpp"

using namespace ldelta;

namespace {

constexpr int kParse = 1, kType = 2, kNumeric = 3, kRuntime = 4, kUsage = 64;

struct UsageError {
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError{"cannot read " + path};
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

template <class F>
int guarded(const std::string& file, F body) {
  try {
    body();
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "ldelta: " << e.message << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << render(file, e) << "\n";
    return kParse;
  } catch (const TypeError& e) {
    std::cerr << render(file, e) << "\n";
    return kType;
  } catch (const NonConvergence& e) {
    std::cerr << file << ": [Non-convergence] " << e.where() << "; best value " << num(e.best_value())
              << ", error estimate " << num(e.error_estimate()) << "\n";
    return kNumeric;
  } catch (const RuntimeError& e) {
    std::cerr << render(file, e) << "\n";
    return kRuntime;
  } catch (const Error& e) {
    std::cerr << file << ": [Runtime] " << e.what() << "\n";
    return kRuntime;
  } catch (const std::invalid_argument& e) {
    std::cerr << "ldelta: " << e.what() << "\n";
    return kUsage;
  }
}

/// Applies a prelude or program value to real arguments.
double call(const ValuePtr& fn, std::initializer_list<ValuePtr> args, const QuadConfig& cfg) {
  ValuePtr v = fn;
  for (const ValuePtr& a : args) v = apply(v, a, cfg);
  return as_real(v);
}

ValuePtr lookup(const Env& env, const std::string& name) {
  ValuePtr v = env.lookup(name);
  if (!v) throw std::logic_error("unbound " + name);
  return v;
}

/// Evaluates the definitions of a built-in example program.
Env load(const std::string& source, const Prelude& prelude, const QuadConfig& cfg) {
  CheckedProgram prog = check_source(source, prelude);
  return eval_definitions(prelude.env, prog.definitions, cfg);
}

const char* kRelu = R"(
relu : Dist(R^1) = ind (pred(x: R){ x >= 0 }) (fun x: R -> x);
)";

const char* kHeaviside = R"(
heaviside : Dist(R^1) = ind (pred(x: R){ x >= 0 }) (fun x: R -> 1.0);
pairAt : R -> R = fun c: R -> < d/d1 heaviside, bump1(c, 1.0) >;
)";

const char* kBall = R"(
v = 1.0;
twall = 1.0;
u : Dist(R^1) = ind (pred(t: R){ t <= twall }) (fun t: R -> v) +. ind (pred(t: R){ t > twall }) (fun t: R -> -v);
velocity : R -> R+ -> R = fun t: R -> fun eps: R+ ->
  < u, bump1(t, eps) > / < lift (fun s: R -> 1.0), bump1(t, eps) >;
)";

const char* kCoin = R"(
area : R -> R = fun p: R -> < ind (pred(x: R){ 0 < x < p }) (fun x: R -> 1.0), plateau([0, 1], [-1, 2]) >;
coin : Dist(R^1) = lift area;
)";

const char* kRay = R"(
dI : R -> R+ -> R = fun phi: R -> fun eps: R+ -> der (lift I) phi eps;
)";

// max(0, x) - max(0, -x) with the tie at 0 placed three different ways.
const char* kSillyId = R"(
sillyid1 : Dist(R^1) =
  ind (pred(x: R){ x >= 0 }) (fun x: R -> x) +. (-1.0) *. ind (pred(x: R){ x < 0 }) (fun x: R -> -x);
sillyid2 : Dist(R^1) =
  ind (pred(x: R){ x > 0 }) (fun x: R -> x) +. (-1.0) *. ind (pred(x: R){ x <= 0 }) (fun x: R -> -x);
sillyid3 : Dist(R^1) =
  ind (pred(x: R){ x >= 0 }) (fun x: R -> x) +. (-1.0) *. ind (pred(x: R){ x <= 0 }) (fun x: R -> -x);
)";

struct ExampleOptions {
  std::string name;
  std::optional<double> eps;
  double phi_min = 0.05, phi_max = 0.95, phi_step = 0.05;
};

/// Grid lo, lo + step, ... up to hi, computed by index to avoid drift.
template <class F>
void sweep(double lo, double hi, double step, F row) {
  long n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long i = 0; i <= n; ++i) row(lo + i * step);
}

void run_example(const ExampleOptions& o, const std::optional<Scene>& scene, const QuadConfig& cfg) {
  Prelude prelude = make_prelude(scene.value_or(Scene{}));
  ValuePtr der = lookup(prelude.env, "der");
  auto R = [](double v) { return make_real(v); };
  if (o.name == "relu") {
    double eps = o.eps.value_or(0.1);
    Env env = load(kRelu, prelude, cfg);
    ValuePtr relu = lookup(env, "relu");
    std::cout << "param,value\n";
    sweep(-1, 1, 0.01, [&](double x) {
      std::cout << num(x) << "," << num(call(der, {relu, R(x), R(eps)}, cfg)) << "\n";
    });
  } else if (o.name == "heaviside") {
    Env env = load(kHeaviside, prelude, cfg);
    ValuePtr pair_at = lookup(env, "pairAt");
    std::cout << "param,value,exact\n";
    sweep(-1, 1, 0.05, [&](double c) {
      std::cout << num(c) << "," << num(call(pair_at, {R(c)}, cfg)) << ","
                << num(eval_bump_1d(c, 1.0, 0.0)) << "\n";
    });
  } else if (o.name == "ball") {
    double eps = o.eps.value_or(0.1);
    Env env = load(kBall, prelude, cfg);
    ValuePtr u = lookup(env, "u"), velocity = lookup(env, "velocity");
    std::cout << "param,velocity,acceleration\n";
    sweep(0, 2, 0.01, [&](double t) {
      std::cout << num(t) << "," << num(call(velocity, {R(t), R(eps)}, cfg)) << ","
                << num(call(der, {u, R(t), R(eps)}, cfg)) << "\n";
    });
  } else if (o.name == "coin") {
    double eps = o.eps.value_or(0.1);
    Env env = load(kCoin, prelude, cfg);
    ValuePtr coin = lookup(env, "coin");
    std::cout << "param,value\n";
    sweep(-0.5, 1.5, 0.05, [&](double p) {
      std::cout << num(p) << "," << num(call(der, {coin, R(p), R(eps)}, cfg)) << "\n";
    });
  } else if (o.name == "sillyid") {
    double eps = o.eps.value_or(0.1);
    Env env = load(kSillyId, prelude, cfg);
    ValuePtr s1 = lookup(env, "sillyid1"), s2 = lookup(env, "sillyid2"), s3 = lookup(env, "sillyid3");
    std::cout << "param,sillyid1,sillyid2,sillyid3\n";
    sweep(-1, 1, 0.1, [&](double x) {
      std::cout << num(x) << "," << num(call(der, {s1, R(x), R(eps)}, cfg)) << ","
                << num(call(der, {s2, R(x), R(eps)}, cfg)) << ","
                << num(call(der, {s3, R(x), R(eps)}, cfg)) << "\n";
    });
  } else if (o.name == "ray") {
    if (!scene) throw UsageError{"example ray needs --scene"};
    double eps = o.eps.value_or(0.05);
    Env env = load(kRay, prelude, cfg);
    ValuePtr pixel = lookup(env, "I"), grad = lookup(env, "dI");
    std::cout << "param,I,dI\n";
    sweep(o.phi_min, o.phi_max, o.phi_step, [&](double phi) {
      std::cout << num(phi) << "," << num(call(pixel, {R(phi)}, cfg)) << ","
                << num(call(grad, {R(phi), R(eps)}, cfg)) << "\n";
    });
  } else {
    throw UsageError{"unknown example '" + o.name +
                     "' (expected relu, heaviside, ball, coin, sillyid or ray)"};
  }
}

struct GradOptions {
  std::string file;
  double x0 = 0, eps = 0.05, lr = 0.1;
  long steps = 100;
};

/// The gradDescLr recurrence x <- x - lr * der f x eps, traced per step.
void run_grad(const GradOptions& o, const Prelude& prelude, const QuadConfig& cfg) {
  CheckedProgram prog = check_source(read_file(o.file), prelude);
  RunResult r = run_program(prog, prelude, cfg);
  if (!type_equal(r.type, dist_type(1)))
    throw TypeError(TypeErrorKind::Mismatch, prog.source.definitions[prog.main].span, "Definition",
                    "grad needs main : Dist(R^1), found " + to_string(r.type));
  ValuePtr der = lookup(prelude.env, "der");
  double x = o.x0;
  std::cout << "step,x,grad\n";
  for (long step = 0; step < o.steps; ++step) {
    double g = call(der, {r.value, make_real(x), make_real(o.eps)}, cfg);
    std::cout << step << "," << num(x) << "," << num(g) << "\n" << std::flush;
    x -= o.lr * g;
  }
  std::cerr << "final x = " << num(x) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interpreter for the lambda-delta calculus of distributions"};
  app.require_subcommand(1);
  app.fallthrough();

  QuadConfig cfg;
  double tol = 1e-8;
  std::string scene_path;
  app.add_option("--tol", tol, "Absolute and relative quadrature tolerance")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-depth", cfg.max_depth, "Bisection depth limit per axis")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-evals", cfg.max_evals, "Evaluation budget per adaptive integral")
      ->check(CLI::PositiveNumber);
  app.add_option("--scene", scene_path, "Scene file for charFunc and I");

  std::string file;
  auto* check = app.add_subcommand("check", "Typecheck a program and list its definitions");
  check->add_option("file", file, "Program")->required();
  auto* run = app.add_subcommand("run", "Evaluate a program's main definition");
  run->add_option("file", file, "Program")->required();

  ExampleOptions ex;
  auto* example = app.add_subcommand("example", "Emit a case study as CSV");
  example->add_option("name", ex.name, "relu, heaviside, ball, coin, sillyid or ray")->required();
  example->add_option("--eps", ex.eps, "Bump radius for derivatives")->check(CLI::PositiveNumber);
  example->add_option("--phi-min", ex.phi_min, "First phi for ray");
  example->add_option("--phi-max", ex.phi_max, "Last phi for ray");
  example->add_option("--phi-step", ex.phi_step, "phi step for ray")->check(CLI::PositiveNumber);

  GradOptions go;
  auto* grad = app.add_subcommand("grad", "Gradient descent on main : Dist(R^1)");
  grad->add_option("file", go.file, "Program")->required();
  grad->add_option("--x0", go.x0, "Starting point");
  grad->add_option("--steps", go.steps, "Number of steps")->check(CLI::NonNegativeNumber);
  grad->add_option("--eps", go.eps, "Bump radius")->check(CLI::PositiveNumber);
  grad->add_option("--lr", go.lr, "Learning rate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }
  cfg.abs_tol = cfg.rel_tol = tol;

  std::optional<Scene> scene;
  std::string label = grad->parsed() ? go.file : example->parsed() ? "example " + ex.name : file;
  int status = guarded(label, [&] {
    if (!scene_path.empty()) scene = load_scene(scene_path);
  });
  if (status != 0) return status;

  return guarded(label, [&] {
    if (example->parsed()) {
      run_example(ex, scene, cfg);
      return;
    }
    Prelude prelude = make_prelude(scene.value_or(Scene{}));
    if (grad->parsed()) {
      run_grad(go, prelude, cfg);
      return;
    }
    CheckedProgram prog = check_source(read_file(file), prelude);
    if (check->parsed()) {
      for (const auto& d : prog.definitions) std::cout << d.name << " : " << to_string(d.type) << "\n";
      return;
    }
    RunResult r = run_program(prog, prelude, cfg);
    std::cout << show(r.value) << "\n";
  });
}
