#pragma once

#include <stdexcept>
#include <string>

namespace lncd {

enum class ErrorCode {
  InvalidArgument = 1,
  TiedWorstLink,
  StateSpaceTooLarge,
  SingularSystem,
  SafetyCapExceeded,
  EmptyStorage,
  DimensionMismatch,
  ZeroInverse,
  Io,
};

// Every failure raised by the library carries a code so the C layer can map
// it to a status value without parsing the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lncd
