#pragma once

#include <stdexcept>
#include <string>

namespace fop {

enum class ErrorKind {
  invalid_argument,  // caller violated a precondition
  data,              // malformed or inconsistent input data
  numerical,         // non-finite values or other numerical breakdown
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void throw_invalid(const std::string& what) {
  throw Error(ErrorKind::invalid_argument, what);
}

[[noreturn]] inline void throw_data(const std::string& what) {
  throw Error(ErrorKind::data, what);
}

[[noreturn]] inline void throw_numerical(const std::string& what) {
  throw Error(ErrorKind::numerical, what);
}

}  // namespace fop
