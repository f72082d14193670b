#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ldelta {

/// Location of a term or token in the source text.  `line`/`col` are 1-based;
/// a default-constructed span means "no location" (terms built in code).
struct Span {
  std::size_t offset = 0;
  std::size_t length = 0;
  int line = 0;
  int col = 0;

  bool valid() const { return line > 0; }
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(Span span, std::string expected, std::string found,
             bool reserved_word = false);

  const Span& span() const { return span_; }
  const std::string& expected() const { return expected_; }
  const std::string& found() const { return found_; }
  bool reserved_word() const { return reserved_word_; }

 private:
  Span span_;
  std::string expected_;
  std::string found_;
  bool reserved_word_;
};

enum class TypeErrorKind { Mismatch, UnboundVariable, IndexOutOfRange };

class TypeError : public Error {
 public:
  TypeError(TypeErrorKind kind, Span span, std::string rule,
            std::string message);

  TypeErrorKind kind() const { return kind_; }
  const Span& span() const { return span_; }
  const std::string& rule() const { return rule_; }
  const std::string& message() const { return message_; }

 private:
  TypeErrorKind kind_;
  Span span_;
  std::string rule_;
  std::string message_;
};

/// Runtime numeric failure in the evaluator (division by zero, log of a
/// nonpositive number, ...).
class RuntimeError : public Error {
 public:
  RuntimeError(Span span, std::string message);

  const Span& span() const { return span_; }
  const std::string& message() const { return message_; }

 private:
  Span span_;
  std::string message_;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

class OrderLimitExceeded : public Error {
 public:
  using Error::Error;
};

class UnsupportedDimension : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature ran out of depth or evaluations before meeting its
/// tolerance.  The best available estimate is carried along so callers can
/// decide whether to accept it.
class NonConvergence : public Error {
 public:
  NonConvergence(double best_value, double error_estimate, std::string where);

  double best_value() const { return best_value_; }
  double error_estimate() const { return error_estimate_; }
  const std::string& where() const { return where_; }

 private:
  double best_value_;
  double error_estimate_;
  std::string where_;
};

/// `file:line:col: [RULE] message`
std::string render(const std::string& file, const ParseError& e);
std::string render(const std::string& file, const TypeError& e);
std::string render(const std::string& file, const RuntimeError& e);

}  // namespace ldelta
