#include "fmtwb/errors.hpp"

namespace fmtwb {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::syntax_error: return "SyntaxError";
    case Errc::arity_error: return "ArityError";
    case Errc::unknown_symbol: return "UnknownSymbol";
    case Errc::unbound_variable: return "UnboundVariable";
    case Errc::not_a_sentence: return "NotASentence";
    case Errc::missing_constant: return "MissingConstant";
    case Errc::not_a_subset: return "NotASubset";
    case Errc::vocabulary_mismatch: return "VocabularyMismatch";
    case Errc::size_limit_exceeded: return "SizeLimitExceeded";
    case Errc::precondition_failed: return "PreconditionFailed";
    case Errc::empty_collection: return "EmptyCollection";
    case Errc::not_an_extension: return "NotAnExtension";
    case Errc::budget_exceeded: return "BudgetExceeded";
    case Errc::missing_certificate: return "MissingCertificate";
    case Errc::wrong_arity: return "WrongArity";
    case Errc::io_error: return "IoError";
  }
  return "Error";
}

Error::Error(Errc code, const std::string& message, std::size_t position)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message),
      code_(code),
      position_(position) {}

void fail(Errc code, const std::string& message, std::size_t position) {
  throw Error(code, message, position);
}

}  // namespace fmtwb
