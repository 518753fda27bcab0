#pragma once

#include <stdexcept>
#include <string>

namespace reopen {

enum class ErrorKind { Config, Data, Numerical };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::Config: return "config";
    case ErrorKind::Data: return "data";
    case ErrorKind::Numerical: return "numerical";
  }
  return "?";
}

// Process exit code for an error kind.
inline int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Config: return 1;
    case ErrorKind::Data: return 2;
    case ErrorKind::Numerical: return 3;
  }
  return 1;
}

inline Error config_error(const std::string& m) { return Error(ErrorKind::Config, m); }
inline Error data_error(const std::string& m) { return Error(ErrorKind::Data, m); }
inline Error numerical_error(const std::string& m) { return Error(ErrorKind::Numerical, m); }

}  // namespace reopen
