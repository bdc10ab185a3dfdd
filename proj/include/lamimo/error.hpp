#pragma once

#include <stdexcept>
#include <string>

namespace lamimo {

enum class ErrorKind {
  config,       // invalid parameters or configuration
  model,        // a model precondition was violated at runtime
  papr,         // mean PA output exceeds the PAPR backoff limit
  convergence,  // best-response iteration did not settle
  io,
};

/// Single exception type for the library; the kind selects the CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// Same kind, message prefixed with the pipeline stage that failed.
  Error in_stage(const std::string& stage) const;

 private:
  ErrorKind kind_;
};

/// 0 success, 1 config error, 2 convergence failure, 3 I/O error.
int exit_code(ErrorKind kind) noexcept;

[[noreturn]] void throw_config(const std::string& field, const std::string& why);
[[noreturn]] void throw_model(const std::string& what);

}  // namespace lamimo
