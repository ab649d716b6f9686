#pragma once

#include <stdexcept>
#include <string>

namespace etacheck {

enum class ErrorKind {
  InvalidInput,      // malformed spec, bad arguments, failed preconditions
  SearchExhausted,   // bounded search found nothing
  ContractViolation  // internal invariant broke, e.g. non-integral U-image
};

/// Every library error names the module and operation it came from.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string module, std::string operation, const std::string& what)
      : std::runtime_error(module + "::" + operation + ": " + what),
        kind_(kind),
        module_(std::move(module)),
        operation_(std::move(operation)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& module() const noexcept { return module_; }
  const std::string& operation() const noexcept { return operation_; }

 private:
  ErrorKind kind_;
  std::string module_;
  std::string operation_;
};

}  // namespace etacheck
