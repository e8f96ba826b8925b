#pragma once

#include <stdexcept>
#include <string>

namespace twist {

struct Position {
  int line = 1;
  int column = 1;

  auto operator<=>(const Position&) const = default;
};

/// Raised for anything that stops a script from being compiled: lexical and
/// syntax errors, resolution failures, import problems.
class CompileError : public std::runtime_error {
 public:
  explicit CompileError(const std::string& message, Position pos = {},
                        std::string file = {})
      : std::runtime_error(format(message, pos, file)),
        message_(message),
        pos_(pos),
        file_(std::move(file)) {}

  const std::string& message() const { return message_; }
  Position position() const { return pos_; }
  const std::string& file() const { return file_; }

  CompileError in_file(const std::string& file) const {
    return file_.empty() ? CompileError(message_, pos_, file) : *this;
  }

 private:
  static std::string format(const std::string& message, Position pos,
                            const std::string& file) {
    std::string out = file.empty() ? std::string() : file + ":";
    out += std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": ";
    return out + message;
  }

  std::string message_;
  Position pos_;
  std::string file_;
};

/// A broken runtime invariant. Never caused by a user program.
class InternalFault : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace twist
