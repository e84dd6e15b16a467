#pragma once

#include <stdexcept>
#include <string>

namespace kdiff {

/// Validation or runtime failure raised by any module. Carries the module
/// name and the offending parameter so the CLI can report a single
/// machine-parseable line.
class Error : public std::runtime_error {
public:
  Error(std::string module, std::string parameter, const std::string &message)
      : std::runtime_error(module + ": " + parameter + ": " + message),
        module_(std::move(module)), parameter_(std::move(parameter)),
        message_(message) {}

  const std::string &module() const noexcept { return module_; }
  const std::string &parameter() const noexcept { return parameter_; }
  const std::string &message() const noexcept { return message_; }

private:
  std::string module_;
  std::string parameter_;
  std::string message_;
};

} // namespace kdiff
