#include "lamimo/error.hpp"

namespace lamimo {

Error Error::in_stage(const std::string& stage) const {
  return Error(kind_, stage + ": " + what());
}

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::convergence:
      return 2;
    case ErrorKind::io:
      return 3;
    case ErrorKind::config:
    case ErrorKind::model:
    case ErrorKind::papr:
      return 1;
  }
  return 1;
}

void throw_config(const std::string& field, const std::string& why) {
  throw Error(ErrorKind::config, "invalid " + field + ": " + why);
}

void throw_model(const std::string& what) { throw Error(ErrorKind::model, what); }

}  // namespace lamimo
