#pragma once

#include <stdexcept>
#include <string>

namespace rb {

// Maps onto CLI exit codes: usage 1, data 2, invariant 3.
enum class ErrorKind { Usage = 1, Data = 2, Invariant = 3 };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  explicit Error(const std::string& what) : Error(ErrorKind::Data, what) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(const std::string& what) { throw Error(ErrorKind::Data, what); }
[[noreturn]] inline void fail_usage(const std::string& what) { throw Error(ErrorKind::Usage, what); }
[[noreturn]] inline void fail_invariant(const std::string& what) {
  throw Error(ErrorKind::Invariant, what);
}

void log_warning(const std::string& message);

}  // namespace rb
