#include "bss/error.hpp"

namespace bss {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::UnknownSymbol: return "UnknownSymbol";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownInstructionForm: return "UnknownInstructionForm";
    case ErrorKind::UnresolvedOracle: return "UnresolvedOracle";
    case ErrorKind::KindMismatch: return "KindMismatch";
    case ErrorKind::EvaluatorCannotCertify: return "EvaluatorCannotCertify";
    case ErrorKind::NoEnumerator: return "NoEnumerator";
    case ErrorKind::IdentityUnavailable: return "IdentityUnavailable";
    case ErrorKind::UnknownPseudo: return "UnknownPseudo";
    case ErrorKind::RegisterCollision: return "RegisterCollision";
    case ErrorKind::CaseMismatch: return "CaseMismatch";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "?";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

ParseError::ParseError(ErrorKind kind, std::size_t line, std::size_t column, const std::string& what)
    : Error(kind, std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

}  // namespace bss
