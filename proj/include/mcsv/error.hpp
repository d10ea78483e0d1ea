#pragma once

#include <stdexcept>
#include <string>

namespace mcsv {

enum class ErrorKind {
  InvalidResolution,
  Parameter,
  NonFinite,
  GridMismatch,
  Placement,
  SingularEvaluation,
  Scope,
  DegenerateConfig,
  BarrierConstruction,
  Config,
  Io,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so callers and tests
/// can branch on the category without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mcsv
