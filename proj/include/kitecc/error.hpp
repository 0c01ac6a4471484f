#pragma once

#include <stdexcept>
#include <string>

namespace kitecc {

enum class ErrorKind {
  DegenerateConfiguration,
  FormulaInapplicable,
  Domain,
  Singularity,
  AmbiguousFit,
  DivisionByZero,
  InconsistentInput,
  DegenerateKite,
  NearSingular,
  Bracket,
  IllPosedSlice,
  Decomposition,
  Divergence,
};

const char* to_string(ErrorKind kind) noexcept;

// Every failure raised by the library carries a kind so callers (and the CLI)
// can branch on it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace kitecc
