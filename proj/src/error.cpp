#include "ldelta/error.hpp"

#include <sstream>

namespace ldelta {
namespace {

std::string where(const std::string& file, const Span& span) {
  std::ostringstream out;
  out << (file.empty() ? "<input>" : file);
  if (span.valid()) out << ':' << span.line << ':' << span.col;
  return out.str();
}

std::string parse_message(const std::string& expected, const std::string& found,
                          bool reserved) {
  if (reserved) return "reserved word " + found + " cannot be used as " + expected;
  return "expected " + expected + ", found " + found;
}

}  // namespace

ParseError::ParseError(Span span, std::string expected, std::string found,
                       bool reserved_word)
    : Error(parse_message(expected, found, reserved_word)),
      span_(span),
      expected_(std::move(expected)),
      found_(std::move(found)),
      reserved_word_(reserved_word) {}

TypeError::TypeError(TypeErrorKind kind, Span span, std::string rule,
                     std::string message)
    : Error("[" + rule + "] " + message),
      kind_(kind),
      span_(span),
      rule_(std::move(rule)),
      message_(std::move(message)) {}

RuntimeError::RuntimeError(Span span, std::string message)
    : Error(message), span_(span), message_(std::move(message)) {}

NonConvergence::NonConvergence(double best_value, double error_estimate,
                               std::string where)
    : Error("quadrature did not converge in " + where),
      best_value_(best_value),
      error_estimate_(error_estimate),
      where_(std::move(where)) {}

std::string render(const std::string& file, const ParseError& e) {
  return where(file, e.span()) + ": [" +
         (e.reserved_word() ? "Reserved Word" : "Parse") + "] " + e.what();
}

std::string render(const std::string& file, const TypeError& e) {
  return where(file, e.span()) + ": [" + e.rule() + "] " + e.message();
}

std::string render(const std::string& file, const RuntimeError& e) {
  return where(file, e.span()) + ": [Runtime] " + e.message();
}

}  // namespace ldelta
