#pragma once

#include <stdexcept>
#include <string>

namespace ctpt {

/// Structured failure: module and operation that rejected the input plus a
/// witness (an offending edge, cycle, or value) when one exists. The CLI
/// turns these into machine readable error objects.
class Error : public std::runtime_error {
 public:
  Error(std::string module, std::string operation, std::string message,
        std::string witness = "")
      : std::runtime_error(module + "/" + operation + ": " + message +
                           (witness.empty() ? "" : " [" + witness + "]")),
        module_(std::move(module)),
        operation_(std::move(operation)),
        message_(std::move(message)),
        witness_(std::move(witness)) {}

  const std::string& module() const noexcept { return module_; }
  const std::string& operation() const noexcept { return operation_; }
  const std::string& message() const noexcept { return message_; }
  const std::string& witness() const noexcept { return witness_; }

 private:
  std::string module_;
  std::string operation_;
  std::string message_;
  std::string witness_;
};

}  // namespace ctpt
