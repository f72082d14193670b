#include "ldelta/parser.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>

namespace ldelta {
namespace {

using namespace node;

const std::set<std::string_view> kKeywords = {
    "fun", "let",  "in",  "lift", "ind",  "pred", "dirac", "iter", "plateau",
    "exp", "log",  "sin", "cos",  "sqrt", "min",  "max",   "and",  "or",
    "not", "true", "false"};

enum class Tok { Ident, Keyword, Nat, Real, Symbol, Deriv, BumpKw, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  double real = 0;
  std::uint64_t nat = 0;
  int index = 0;  // Deriv index or BumpKw dimension
  Span span;
};

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : src_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t = next();
      out.push_back(t);
      if (t.kind == Tok::End) return out;
    }
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;

  char at(std::size_t i) const { return i < src_.size() ? src_[i] : '\0'; }

  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  void skip_space() {
    for (;;) {
      char c = at(pos_);
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance(1);
      } else if (c == '-' && at(pos_ + 1) == '-') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance(1);
      } else {
        return;
      }
    }
  }

  Token make(Tok kind, std::size_t len) {
    Token t;
    t.kind = kind;
    t.text = std::string(src_.substr(pos_, len));
    t.span = Span{pos_, len, line_, col_};
    advance(len);
    return t;
  }

  static bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }
  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  }

  Token next() {
    if (pos_ >= src_.size()) {
      Token t;
      t.text = "end of input";
      t.span = Span{pos_, 0, line_, col_};
      return t;
    }
    char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) return number();
    if (ident_start(c)) {
      // d/dI is lexed as one token when written without spaces.
      if (c == 'd' && at(pos_ + 1) == '/' && at(pos_ + 2) == 'd' &&
          std::isdigit(static_cast<unsigned char>(at(pos_ + 3)))) {
        std::size_t n = 3;
        while (std::isdigit(static_cast<unsigned char>(at(pos_ + n)))) ++n;
        Token t = make(Tok::Deriv, n);
        t.index = std::atoi(t.text.c_str() + 3);
        return t;
      }
      std::size_t n = 1;
      while (ident_char(at(pos_ + n))) ++n;
      std::string_view word = src_.substr(pos_, n);
      if (word.size() > 4 && word.substr(0, 4) == "bump" && all_digits(word.substr(4))) {
        Token t = make(Tok::BumpKw, n);
        t.index = std::atoi(t.text.c_str() + 4);
        return t;
      }
      return make(kKeywords.count(word) ? Tok::Keyword : Tok::Ident, n);
    }
    static const char* const kSymbols[] = {"->", "+.", "*.", "<=", ">=", "!=",
                                           "(",  ")",  "[",  "]",  "{",  "}",
                                           ",",  ";",  ":",  "=",  "+",  "-",
                                           "*",  "/",  "^",  "<",  ">"};
    for (const char* s : kSymbols) {
      std::string_view sv(s);
      if (src_.substr(pos_, sv.size()) == sv) return make(Tok::Symbol, sv.size());
    }
    Token bad = make(Tok::Symbol, 1);
    throw ParseError(bad.span, "a token", "'" + bad.text + "'");
  }

  Token number() {
    std::size_t n = 0;
    bool is_real = false;
    while (std::isdigit(static_cast<unsigned char>(at(pos_ + n)))) ++n;
    if (at(pos_ + n) == '.' && std::isdigit(static_cast<unsigned char>(at(pos_ + n + 1)))) {
      is_real = true;
      ++n;
      while (std::isdigit(static_cast<unsigned char>(at(pos_ + n)))) ++n;
    }
    if (at(pos_ + n) == 'e' || at(pos_ + n) == 'E') {
      std::size_t m = n + 1;
      if (at(pos_ + m) == '+' || at(pos_ + m) == '-') ++m;
      if (std::isdigit(static_cast<unsigned char>(at(pos_ + m)))) {
        is_real = true;
        n = m;
        while (std::isdigit(static_cast<unsigned char>(at(pos_ + n)))) ++n;
      }
    }
    Token t = make(is_real ? Tok::Real : Tok::Nat, n);
    if (is_real) {
      t.real = std::strtod(t.text.c_str(), nullptr);
    } else {
      errno = 0;
      t.nat = std::strtoull(t.text.c_str(), nullptr, 10);
      if (errno == ERANGE) throw ParseError(t.span, "a natural number below 2^64", t.text);
    }
    return t;
  }
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::End: return "end of input";
    case Tok::Keyword: return "keyword '" + t.text + "'";
    default: return "'" + t.text + "'";
  }
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(Lexer(text).run()) {}

  SourceFile file() {
    SourceFile src;
    std::set<std::string> seen;
    while (peek().kind != Tok::End) {
      Span start = peek().span;
      Token name_tok = peek();
      std::string name = ident("definition name");
      if (seen.count(name))
        throw ParseError(name_tok.span, "a fresh definition name",
                         "'" + name + "' (already defined)");
      seen.insert(name);
      TypePtr annot;
      if (accept(":")) annot = type();
      expect("=", "'=' in definition");
      TermPtr body = term();
      if (peek().kind != Tok::End) expect(";", "';' after definition");
      src.definitions.push_back({name, annot, body, span_from(start)});
    }
    for (const auto& d : src.definitions)
      if (d.name == "main") src.main = d.body;
    if (!src.main && !src.definitions.empty()) src.main = src.definitions.back().body;
    return src;
  }

  TermPtr whole_term() {
    TermPtr t = term();
    if (peek().kind != Tok::End) throw ParseError(peek().span, "end of input", describe(peek()));
    return t;
  }

  TypePtr whole_type() {
    TypePtr t = type();
    if (peek().kind != Tok::End) throw ParseError(peek().span, "end of input", describe(peek()));
    return t;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::size_t prev_end_ = 0;
  bool in_pred_ = false;

  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  Token take() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    prev_end_ = t.span.offset + t.span.length;
    return t;
  }
  bool is_sym(std::string_view s, std::size_t k = 0) const {
    return peek(k).kind == Tok::Symbol && peek(k).text == s;
  }
  bool is_kw(std::string_view s) const {
    return peek().kind == Tok::Keyword && peek().text == s;
  }
  bool accept(std::string_view s) {
    if (!is_sym(s)) return false;
    take();
    return true;
  }
  void expect(std::string_view s, const std::string& what) {
    if (!accept(s)) throw ParseError(peek().span, what, describe(peek()));
  }
  std::string ident(const std::string& what) {
    const Token& t = peek();
    if (t.kind == Tok::Ident) return take().text;
    if (t.kind == Tok::Keyword || t.kind == Tok::BumpKw || t.kind == Tok::Deriv)
      throw ParseError(t.span, what, t.text, true);
    throw ParseError(t.span, what, describe(t));
  }
  Span span_from(const Span& start) const {
    return Span{start.offset, prev_end_ - start.offset, start.line, start.col};
  }
  template <class Node>
  TermPtr mk(Node n, const Span& start) const {
    return make_term(std::move(n), span_from(start));
  }

  // -- types ---------------------------------------------------------------

  TypePtr type() {
    TypePtr l = prod_type();
    if (accept("->")) return arrow_type(l, type());
    return l;
  }

  TypePtr prod_type() {
    TypePtr l = atype();
    if (accept("*")) return prod_type(l, prod_type());
    return l;
  }

  TypePtr prod_type(TypePtr l, TypePtr r) { return ldelta::prod_type(std::move(l), std::move(r)); }

  int positive_nat(const std::string& what) {
    const Token& t = peek();
    if (t.kind != Tok::Nat || t.nat == 0 || t.nat > 64) throw ParseError(t.span, what, describe(t));
    return static_cast<int>(take().nat);
  }

  TypePtr atype() {
    const Token& t = peek();
    if (t.kind == Tok::Ident && t.text == "R") {
      take();
      if (accept("+")) return pos_real_type();
      if (accept("^")) return real_vector_type(positive_nat("a dimension"));
      return real_type();
    }
    if (t.kind == Tok::Ident && t.text == "N") {
      take();
      return nat_type();
    }
    if (t.kind == Tok::Ident && (t.text == "Pred" || t.text == "Test" || t.text == "Dist")) {
      std::string head = take().text;
      expect("(", "'(' after " + head);
      int n = vector_dim();
      expect(")", "')'");
      if (head == "Pred") return pred_type(n);
      if (head == "Test") return test_type(n);
      return dist_type(n);
    }
    if (accept("(")) {
      TypePtr inner = type();
      expect(")", "')'");
      return inner;
    }
    throw ParseError(t.span, "a type", describe(t));
  }

  int vector_dim() {
    Span start = peek().span;
    TypePtr t = prod_type();
    if (auto n = real_vector_dim(*t)) return *n;
    throw ParseError(span_from(start), "a vector type R^n", to_string(t));
  }

  // -- terms ---------------------------------------------------------------

  TermPtr term() {
    Span start = peek().span;
    if (is_kw("fun")) {
      take();
      std::string x = ident("parameter name");
      expect(":", "':' and a type annotation");
      TypePtr annot = prod_type();
      expect("->", "'->'");
      TermPtr body = term();
      return mk(Lam{x, annot, body}, start);
    }
    if (is_kw("let")) {
      take();
      if (accept("(")) {
        std::string a = ident("variable name");
        expect(",", "','");
        std::string b = ident("variable name");
        expect(")", "')'");
        expect("=", "'='");
        TermPtr bound = term();
        expect_kw("in");
        TermPtr body = term();
        return mk(LetPair{a, b, bound, body}, start);
      }
      std::string x = ident("variable name");
      expect("=", "'='");
      TermPtr bound = term();
      expect_kw("in");
      TermPtr body = term();
      return mk(Let{x, bound, body}, start);
    }
    return dist_sum();
  }

  void expect_kw(std::string_view kw) {
    if (!is_kw(kw)) throw ParseError(peek().span, "'" + std::string(kw) + "'", describe(peek()));
    take();
  }

  TermPtr dist_sum() {
    Span start = peek().span;
    TermPtr l = dist_scale();
    while (accept("+.")) {
      TermPtr r = dist_scale();
      l = mk(DistAdd{l, r}, start);
    }
    return l;
  }

  TermPtr dist_scale() {
    Span start = peek().span;
    TermPtr a = additive();
    if (accept("*.")) {
      TermPtr d = dist_scale();
      return mk(ScalarMul{a, d}, start);
    }
    return a;
  }

  TermPtr additive() {
    Span start = peek().span;
    TermPtr l = multiplicative();
    for (;;) {
      ArithOp op;
      if (is_sym("+")) op = ArithOp::Add;
      else if (is_sym("-")) op = ArithOp::Sub;
      else return l;
      take();
      TermPtr r = multiplicative();
      l = mk(Arith{op, {l, r}}, start);
    }
  }

  TermPtr multiplicative() {
    Span start = peek().span;
    TermPtr l = unary();
    for (;;) {
      ArithOp op;
      if (is_sym("*")) op = ArithOp::Mul;
      else if (is_sym("/")) op = ArithOp::Div;
      else return l;
      take();
      TermPtr r = unary();
      l = mk(Arith{op, {l, r}}, start);
    }
  }

  TermPtr unary() {
    Span start = peek().span;
    if (accept("-")) {
      const Token& n = peek();
      if ((n.kind == Tok::Nat || n.kind == Tok::Real) && !is_sym("^", 1) && !starts_atom(1)) {
        Token lit = take();
        double v = lit.kind == Tok::Nat ? static_cast<double>(lit.nat) : lit.real;
        return mk(RealLit{-v}, start);
      }
      TermPtr arg = unary();
      return mk(Arith{ArithOp::Neg, {arg}}, start);
    }
    return power();
  }

  TermPtr power() {
    Span start = peek().span;
    TermPtr base = application();
    if (accept("^")) {
      bool neg = accept("-");
      const Token& t = peek();
      if (t.kind != Tok::Nat || t.nat > 1000000)
        throw ParseError(t.span, "an integer exponent", describe(t));
      int k = static_cast<int>(take().nat);
      return mk(Arith{ArithOp::Pow, {base}, neg ? -k : k}, start);
    }
    return base;
  }

  bool starts_atom(std::size_t k = 0) const {
    const Token& t = peek(k);
    switch (t.kind) {
      case Tok::Ident:
      case Tok::Nat:
      case Tok::Real:
      case Tok::BumpKw:
        return true;
      case Tok::Keyword:
        return t.text == "plateau" || t.text == "pred" ||
               (in_pred_ && (t.text == "true" || t.text == "false"));
      case Tok::Symbol:
        return t.text == "(" || (t.text == "<" && !in_pred_);
      default:
        return false;
    }
  }

  TermPtr application() {
    Span start = peek().span;
    TermPtr f = prefix();
    while (starts_atom()) {
      TermPtr a = atom();
      f = mk(App{f, a}, start);
    }
    return f;
  }

  TermPtr prefix() {
    Span start = peek().span;
    const Token& t = peek();
    if (t.kind == Tok::Deriv) {
      int index = take().index;
      TermPtr d = atom();
      return mk(PartialDeriv{index, d}, start);
    }
    if (t.kind != Tok::Keyword) return atom();
    const std::string& kw = t.text;
    static const std::pair<const char*, ArithOp> kUnary[] = {
        {"exp", ArithOp::Exp}, {"log", ArithOp::Log},   {"sin", ArithOp::Sin},
        {"cos", ArithOp::Cos}, {"sqrt", ArithOp::Sqrt}, {"min", ArithOp::Min},
        {"max", ArithOp::Max}};
    for (const auto& [name, op] : kUnary) {
      if (kw != name) continue;
      take();
      std::vector<TermPtr> args{atom()};
      if (arity(op) == 2) args.push_back(atom());
      return mk(Arith{op, std::move(args)}, start);
    }
    if (kw == "lift") {
      take();
      TermPtr f = atom();
      return mk(Lift{f}, start);
    }
    if (kw == "ind") {
      take();
      TermPtr p = atom();
      TermPtr f = atom();
      return mk(Indicator{p, f}, start);
    }
    if (kw == "dirac") {
      take();
      TermPtr p = atom();
      return mk(Dirac{p}, start);
    }
    if (kw == "iter") {
      take();
      TermPtr seed = atom();
      TermPtr step = atom();
      return mk(Iter{seed, step}, start);
    }
    return atom();
  }

  double signed_number() {
    bool neg = accept("-");
    const Token& t = peek();
    if (t.kind == Tok::Nat) return (neg ? -1.0 : 1.0) * static_cast<double>(take().nat);
    if (t.kind == Tok::Real) return (neg ? -1.0 : 1.0) * take().real;
    throw ParseError(t.span, "a number", describe(t));
  }

  Box box() {
    Span start = peek().span;
    Box b;
    do {
      expect("[", "'[' opening an interval");
      double lo = signed_number();
      expect(",", "','");
      double hi = signed_number();
      expect("]", "']'");
      b.lower.push_back(lo);
      b.upper.push_back(hi);
    } while (accept("*"));
    if (!b.valid())
      throw ParseError(span_from(start), "a box with lower < upper on every axis",
                       to_string(b));
    return b;
  }

  TermPtr atom() {
    Span start = peek().span;
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Ident: return mk(Var{take().text}, start);
      case Tok::Nat: return mk(NatLit{take().nat}, start);
      case Tok::Real: return mk(RealLit{take().real}, start);
      case Tok::BumpKw: {
        int n = take().index;
        if (n < 1) throw ParseError(start, "bump dimension >= 1", t.text);
        expect("(", "'(' after bump");
        TermPtr c = term();
        expect(",", "',' between bump center and radius");
        TermPtr r = term();
        expect(")", "')'");
        return mk(Bump{n, c, r}, start);
      }
      case Tok::Keyword:
        if (t.text == "plateau") {
          take();
          expect("(", "'(' after plateau");
          Box inner = box();
          expect(",", "','");
          Box outer = box();
          expect(")", "')'");
          return mk(Plateau{inner, outer}, start);
        }
        if (t.text == "pred") return pred_literal();
        if (in_pred_ && (t.text == "true" || t.text == "false"))
          return mk(BoolLit{take().text == "true"}, start);
        break;
      case Tok::Symbol:
        if (t.text == "(") {
          take();
          TermPtr a = term();
          if (accept(",")) {
            TermPtr b = term();
            expect(")", "')' closing the pair");
            return mk(Pair{a, b}, start);
          }
          expect(")", "')'");
          return a;
        }
        if (t.text == "<" && !in_pred_) {
          take();
          TermPtr d = term();
          if (!is_sym(",")) throw ParseError(start, "',' in distribution pairing", describe(peek()));
          take();
          TermPtr phi = term();
          if (!is_sym(">"))
            throw ParseError(start, "'>' closing distribution pairing", describe(peek()));
          take();
          return mk(DistApply{d, phi}, start);
        }
        break;
      default:
        break;
    }
    throw ParseError(t.span, "a term", describe(t));
  }

  TermPtr pred_literal() {
    Span start = peek().span;
    take();
    expect("(", "'(' after pred");
    std::vector<std::string> vars{ident("coordinate name")};
    while (accept(",")) vars.push_back(ident("coordinate name"));
    expect(":", "':' and a vector type");
    Span dim_span = peek().span;
    int n = vector_dim();
    if (vars.size() != 1 && static_cast<int>(vars.size()) != n)
      throw ParseError(span_from(dim_span),
                       std::to_string(vars.size()) + " coordinates to match the names",
                       "R^" + std::to_string(n));
    expect(")", "')'");
    expect("{", "'{' opening the predicate body");
    bool saved = in_pred_;
    in_pred_ = true;
    TermPtr body = bool_or();
    in_pred_ = saved;
    expect("}", "'}' closing the predicate body");
    return mk(PredLit{vars, n, body}, start);
  }

  // -- predicate bodies ----------------------------------------------------

  TermPtr bool_or() {
    Span start = peek().span;
    TermPtr l = bool_and();
    while (is_kw("or")) {
      take();
      TermPtr r = bool_and();
      l = mk(Logic{LogicOp::Or, {l, r}}, start);
    }
    return l;
  }

  TermPtr bool_and() {
    Span start = peek().span;
    TermPtr l = bool_not();
    while (is_kw("and")) {
      take();
      TermPtr r = bool_not();
      l = mk(Logic{LogicOp::And, {l, r}}, start);
    }
    return l;
  }

  TermPtr bool_not() {
    Span start = peek().span;
    if (is_kw("not")) {
      take();
      TermPtr a = bool_not();
      return mk(Logic{LogicOp::Not, {a}}, start);
    }
    return bool_atom();
  }

  TermPtr bool_atom() {
    Span start = peek().span;
    if (is_kw("true") || is_kw("false")) return mk(BoolLit{take().text == "true"}, start);
    if (is_sym("(")) {
      std::size_t saved_pos = pos_, saved_end = prev_end_;
      bool saved_pred = in_pred_;
      try {
        return comparison();
      } catch (const ParseError&) {
        pos_ = saved_pos;
        prev_end_ = saved_end;
        in_pred_ = saved_pred;
      }
      take();
      TermPtr b = bool_or();
      expect(")", "')'");
      return b;
    }
    return comparison();
  }

  std::optional<CmpOp> cmp_op() const {
    if (peek().kind != Tok::Symbol) return std::nullopt;
    const std::string& s = peek().text;
    if (s == "<") return CmpOp::Lt;
    if (s == "<=") return CmpOp::Le;
    if (s == ">") return CmpOp::Gt;
    if (s == ">=") return CmpOp::Ge;
    if (s == "=") return CmpOp::Eq;
    if (s == "!=") return CmpOp::Ne;
    return std::nullopt;
  }

  TermPtr comparison() {
    Span start = peek().span;
    TermPtr lhs = additive();
    auto op = cmp_op();
    if (!op) throw ParseError(peek().span, "a comparison operator", describe(peek()));
    TermPtr result;
    while (op) {
      take();
      TermPtr rhs = additive();
      TermPtr c = mk(Compare{*op, lhs, rhs}, start);
      result = result ? mk(Logic{LogicOp::And, {result, c}}, start) : c;
      lhs = rhs;
      op = cmp_op();
    }
    return result;
  }
};

// ---------------------------------------------------------------------------
// Printer

int level_of(const TermPtr& t) {
  if (as<Lam>(t) || as<Let>(t) || as<LetPair>(t)) return 0;
  if (as<DistAdd>(t)) return 1;
  if (as<ScalarMul>(t)) return 2;
  if (const auto* a = as<Arith>(t)) {
    switch (a->op) {
      case ArithOp::Add:
      case ArithOp::Sub: return 3;
      case ArithOp::Mul:
      case ArithOp::Div: return 4;
      case ArithOp::Neg: return 5;
      case ArithOp::Pow: return 6;
      default: return 7;
    }
  }
  if (const auto* r = as<RealLit>(t)) return std::signbit(r->value) ? 5 : 8;
  if (as<App>(t) || as<Lift>(t) || as<Indicator>(t) || as<PartialDeriv>(t) ||
      as<Dirac>(t) || as<Iter>(t))
    return 7;
  if (as<Compare>(t) || as<Logic>(t)) return -1;  // only legal inside pred bodies
  return 8;
}

class Printer {
 public:
  std::string out;

  void term(const TermPtr& t, int ctx) {
    bool paren = level_of(t) < ctx;
    if (paren) out += '(';
    body(t);
    if (paren) out += ')';
  }

  void boolean(const TermPtr& t, int ctx) {
    int lvl = 3;
    if (const auto* l = as<Logic>(t))
      lvl = l->op == LogicOp::Or ? 0 : l->op == LogicOp::And ? 1 : 2;
    bool paren = lvl < ctx;
    if (paren) out += '(';
    if (const auto* l = as<Logic>(t)) {
      if (l->op == LogicOp::Not) {
        out += "not ";
        boolean(l->args[0], 2);
      } else {
        boolean(l->args[0], lvl);
        out += l->op == LogicOp::Or ? " or " : " and ";
        boolean(l->args[1], lvl + 1);
      }
    } else if (const auto* c = as<Compare>(t)) {
      term(c->lhs, 3);
      out += ' ';
      out += op_name(c->op);
      out += ' ';
      term(c->rhs, 3);
    } else if (const auto* b = as<BoolLit>(t)) {
      out += b->value ? "true" : "false";
    } else {
      term(t, 3);
    }
    if (paren) out += ')';
  }

 private:
  void annot(const TypePtr& ty) {
    bool paren = ty->kind == TypeKind::Arrow;
    if (paren) out += '(';
    out += to_string(ty);
    if (paren) out += ')';
  }

  void body(const TermPtr& t) {
    if (const auto* v = as<Var>(t)) {
      out += v->name;
    } else if (const auto* r = as<RealLit>(t)) {
      out += format_real(r->value);
    } else if (const auto* n = as<NatLit>(t)) {
      out += std::to_string(n->value);
    } else if (const auto* p = as<Pair>(t)) {
      out += '(';
      term(p->first, 0);
      out += ", ";
      term(p->second, 0);
      out += ')';
    } else if (const auto* lp = as<LetPair>(t)) {
      out += "let (" + lp->first + ", " + lp->second + ") = ";
      term(lp->bound, 0);
      out += " in ";
      term(lp->body, 0);
    } else if (const auto* l = as<Let>(t)) {
      out += "let " + l->name + " = ";
      term(l->bound, 0);
      out += " in ";
      term(l->body, 0);
    } else if (const auto* f = as<Lam>(t)) {
      out += "fun " + f->param + ": ";
      annot(f->annot);
      out += " -> ";
      term(f->body, 0);
    } else if (const auto* a = as<App>(t)) {
      term(a->fn, 7);
      out += ' ';
      term(a->arg, 8);
    } else if (const auto* li = as<Lift>(t)) {
      out += "lift ";
      term(li->fn, 8);
    } else if (const auto* in = as<Indicator>(t)) {
      out += "ind ";
      term(in->pred, 8);
      out += ' ';
      term(in->fn, 8);
    } else if (const auto* d = as<PartialDeriv>(t)) {
      out += "d/d" + std::to_string(d->index) + " ";
      term(d->dist, 8);
    } else if (const auto* s = as<DistAdd>(t)) {
      term(s->left, 1);
      out += " +. ";
      term(s->right, 2);
    } else if (const auto* m = as<ScalarMul>(t)) {
      term(m->scalar, 3);
      out += " *. ";
      term(m->dist, 2);
    } else if (const auto* ap = as<DistApply>(t)) {
      out += "< ";
      term(ap->dist, 0);
      out += ", ";
      term(ap->test, 0);
      out += " >";
    } else if (const auto* b = as<Bump>(t)) {
      out += "bump" + std::to_string(b->dim) + "(";
      term(b->center, 0);
      out += ", ";
      term(b->radius, 0);
      out += ')';
    } else if (const auto* pl = as<Plateau>(t)) {
      out += "plateau(" + box(pl->inner) + ", " + box(pl->outer) + ")";
    } else if (const auto* dr = as<Dirac>(t)) {
      out += "dirac ";
      term(dr->point, 8);
    } else if (const auto* it = as<Iter>(t)) {
      out += "iter ";
      term(it->seed, 8);
      out += ' ';
      term(it->step, 8);
    } else if (const auto* ar = as<Arith>(t)) {
      arith(*ar);
    } else if (const auto* pr = as<PredLit>(t)) {
      out += "pred(";
      for (std::size_t i = 0; i < pr->vars.size(); ++i) {
        if (i) out += ", ";
        out += pr->vars[i];
      }
      out += ": R^" + std::to_string(pr->dim) + "){ ";
      boolean(pr->body, 0);
      out += " }";
    } else {
      // Comparisons and connectives outside a predicate literal.
      boolean(t, 0);
    }
  }

  void arith(const Arith& a) {
    switch (a.op) {
      case ArithOp::Add:
      case ArithOp::Sub:
        term(a.args[0], 3);
        out += a.op == ArithOp::Add ? " + " : " - ";
        term(a.args[1], 4);
        return;
      case ArithOp::Mul:
      case ArithOp::Div:
        term(a.args[0], 4);
        out += a.op == ArithOp::Mul ? " * " : " / ";
        term(a.args[1], 5);
        return;
      case ArithOp::Neg:
        out += '-';
        if (as<RealLit>(a.args[0]) || as<NatLit>(a.args[0])) {
          out += '(';
          term(a.args[0], 0);
          out += ')';
        } else {
          std::size_t at = out.size();
          term(a.args[0], 5);
          if (out[at] == '-') out.insert(at, 1, ' ');  // "--" opens a comment
        }
        return;
      case ArithOp::Pow:
        term(a.args[0], 7);
        out += " ^ " + std::to_string(a.exponent);
        return;
      default:
        out += op_name(a.op);
        for (const auto& arg : a.args) {
          out += ' ';
          term(arg, 8);
        }
    }
  }

  static std::string box(const Box& b) {
    std::string s;
    for (int i = 0; i < b.dim(); ++i) {
      if (i) s += " * ";
      s += "[" + format_real(b.lower[i]) + ", " + format_real(b.upper[i]) + "]";
    }
    return s;
  }
};

}  // namespace

bool is_reserved(std::string_view word) {
  if (kKeywords.count(word)) return true;
  return word.size() > 4 && word.substr(0, 4) == "bump" && all_digits(word.substr(4));
}

SourceFile parse(std::string_view text) { return Parser(text).file(); }
TermPtr parse_term(std::string_view text) { return Parser(text).whole_term(); }
TypePtr parse_type(std::string_view text) { return Parser(text).whole_type(); }

std::string format_real(double v) {
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  std::string s = buf;
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string print(const TermPtr& t) {
  Printer p;
  p.term(t, 0);
  return p.out;
}

std::string print(const SourceFile& src) {
  std::string out;
  for (const auto& d : src.definitions) {
    out += d.name;
    if (d.annot) out += " : " + to_string(d.annot);
    out += " = " + print(d.body) + ";\n";
  }
  return out;
}

}  // namespace ldelta
