#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fmtwb {

// Failure categories used across the workbench.  Every documented error of a
// public operation maps to exactly one code; tests assert on codes, not on
// message text.
enum class Errc {
  syntax_error,
  arity_error,
  unknown_symbol,
  unbound_variable,
  not_a_sentence,
  missing_constant,
  not_a_subset,
  vocabulary_mismatch,
  size_limit_exceeded,
  precondition_failed,
  empty_collection,
  not_an_extension,
  budget_exceeded,
  missing_certificate,
  wrong_arity,
  io_error,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  static constexpr std::size_t no_position = static_cast<std::size_t>(-1);

  Error(Errc code, const std::string& message, std::size_t position = no_position);

  Errc code() const { return code_; }
  // Byte offset into the offending input, or no_position.
  std::size_t position() const { return position_; }

 private:
  Errc code_;
  std::size_t position_;
};

[[noreturn]] void fail(Errc code, const std::string& message,
                       std::size_t position = Error::no_position);

}  // namespace fmtwb
