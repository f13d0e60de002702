#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace muse {

/// Non-fatal messages collected while loading or computing.
using Warnings = std::vector<std::string>;

inline void warn(Warnings* sink, std::string message) {
  if (sink != nullptr) sink->push_back(std::move(message));
}

/// Bad input data: malformed files, unresolved references, empty inputs.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller passed an argument outside the operation's domain.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation is not valid in the current state (session state machine, concurrent mutation).
class StateConflict : public std::runtime_error {
 public:
  StateConflict(std::string reason, const std::string& what)
      : std::runtime_error(what), reason_(std::move(reason)) {}
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string reason_;
};

}  // namespace muse
