#pragma once

// Surface syntax: lexer, recursive-descent parser and printer.  The grammar
// is written out in docs/grammar.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ldelta/syntax.hpp"

namespace ldelta {

struct Definition {
  std::string name;
  TypePtr annot;  // may be null
  TermPtr body;
  Span span;
};

struct SourceFile {
  std::vector<Definition> definitions;
  /// The definition named `main` if present, otherwise the last one.
  TermPtr main;
};

SourceFile parse(std::string_view text);
TermPtr parse_term(std::string_view text);
TypePtr parse_type(std::string_view text);

std::string print(const TermPtr& t);
std::string print(const SourceFile& src);
/// Shortest decimal that reads back to the same double, always with a
/// decimal point or exponent.
std::string format_real(double v);

bool is_reserved(std::string_view word);

}  // namespace ldelta
