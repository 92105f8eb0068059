#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace lienard {

// Every failure carries a short machine-parsable code plus a human message.
// The CLI prints "error: <code>: <message>" on a single line.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

[[noreturn]] inline void raise(std::string code, const std::string& message) {
  throw Error(std::move(code), message);
}

}  // namespace lienard
