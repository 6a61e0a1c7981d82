#pragma once

#include <stdexcept>
#include <string>

namespace bss {

enum class ErrorKind {
  EmptyInput,
  ArityMismatch,
  UnknownSymbol,
  SyntaxError,
  UnknownInstructionForm,
  UnresolvedOracle,
  KindMismatch,
  EvaluatorCannotCertify,
  NoEnumerator,
  IdentityUnavailable,
  UnknownPseudo,
  RegisterCollision,
  CaseMismatch,
  Overflow,
  InvalidArgument,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Parse failures carry a 1-based source position.
class ParseError : public Error {
 public:
  ParseError(ErrorKind kind, std::size_t line, std::size_t column, const std::string& what);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace bss
