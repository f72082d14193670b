#include "ldelta/prelude.hpp"

#include "ldelta/parser.hpp"

namespace ldelta {

std::string prelude_source(const Box& pixel) {
  auto pt = [](double x, double y) { return "(" + format_real(x) + ", " + format_real(y) + ")"; };
  return R"(
der : Dist(R^1) -> R -> R+ -> R =
  fun f: Dist(R^1) -> fun x: R -> fun eps: R+ ->
    < d/d1 f, bump1(x, eps) > / < lift (fun y: R -> 1.0), bump1(x, eps) >;

gradDescLr : Dist(R^1) -> R -> R+ -> R -> N -> R =
  fun f: Dist(R^1) -> fun x0: R -> fun eps: R+ -> fun lr: R ->
    iter x0 (fun xn: R -> xn - lr * der f xn eps);

gradDesc : Dist(R^1) -> R -> R+ -> N -> R =
  fun f: Dist(R^1) -> fun x0: R -> fun eps: R+ -> gradDescLr f x0 eps 1.0;

I : R -> R = fun phi: R -> integral (charFunc phi) )" +
         pt(pixel.lower[0], pixel.lower[1]) + " " + pt(pixel.upper[0], pixel.upper[1]) + ";\n";
}

double pixel_integral(const DistExpr& t, double x1, double y1, double x2, double y2,
                      const QuadConfig& cfg) {
  double hx = (x2 - x1) / 2, hy = (y2 - y1) / 2;
  TestFnPtr psi = plateau(Box({x1, y1}, {x2, y2}), Box({x1 - hx, y1 - hy}, {x2 + hx, y2 + hy}));
  return pair(t, psi, cfg);
}

Prelude make_prelude(const Scene& scene) {
  Prelude p;
  TypePtr r2 = real_vector_type(2);
  p.ctx = p.ctx.extend("integral", arrow_type(dist_type(2), arrow_type(r2, arrow_type(r2, real_type()))))
              .extend("charFunc", arrow_type(real_type(), dist_type(2)));
  p.env = p.env
              .extend("integral", make_prim("integral", 3,
                                            [](const std::vector<ValuePtr>& a, const QuadConfig& cfg) {
                                              std::vector<double> lo = flatten(a[1]);
                                              std::vector<double> hi = flatten(a[2]);
                                              return make_real(pixel_integral(
                                                  *as_dist(a[0]), lo[0], lo[1], hi[0], hi[1], cfg));
                                            }))
              .extend("charFunc", make_prim("charFunc", 1,
                                            [scene](const std::vector<ValuePtr>& a, const QuadConfig&) {
                                              return std::make_shared<const Value>(
                                                  Value{VDist{char_func(scene, as_real(a[0]))}});
                                            }));
  SourceFile src = parse(prelude_source(scene.pixel));
  std::vector<TypedDefinition> defs = check_program(src, p.ctx);
  for (const auto& d : defs) p.ctx = p.ctx.extend(d.name, d.type);
  p.env = eval_definitions(p.env, defs, QuadConfig{});
  return p;
}

CheckedProgram check_source(std::string_view text, const Prelude& prelude) {
  CheckedProgram prog;
  prog.source = parse(text);
  prog.definitions = check_program(prog.source, prelude.ctx);
  for (std::size_t i = 0; i < prog.source.definitions.size(); ++i)
    if (prog.source.definitions[i].body == prog.source.main) prog.main = i;
  return prog;
}

RunResult run_program(const CheckedProgram& prog, const Prelude& prelude, const QuadConfig& cfg) {
  std::vector<ValuePtr> values;
  eval_definitions(prelude.env, prog.definitions, cfg, &values);
  return {values.at(prog.main), prog.definitions.at(prog.main).type};
}

}  // namespace ldelta
