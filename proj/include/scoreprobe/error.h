#pragma once

#include <stdexcept>
#include <string>

namespace scoreprobe {

// Bad input: malformed files, invalid configuration, violated preconditions.
// The CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Failure while executing otherwise valid work (transport errors, scorer
// misbehavior, unwritable outputs). The CLI maps this to exit code 2.
class RuntimeFailure : public std::runtime_error {
 public:
  explicit RuntimeFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace scoreprobe
