#pragma once

#include <stdexcept>
#include <string>

namespace reachguard {

// Precondition violated by the caller (bad dimensions, negative widths, ...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The dynamics produced a non-finite derivative bound.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Face lifting could not validate a step above the minimum step size.
class StepCollapse : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A reach-set message failed wire-format validation.
class MalformedMessage : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Scenario / profile file could not be loaded.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Capacity inequality has a non-positive numerator.
class CapacityZero : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A verification step could not produce a verdict (stale message, missing
// peer, expired window).
class VerdictWithheld : public std::runtime_error {
 public:
  enum class Reason { stale, incomplete, expired };

  VerdictWithheld(Reason reason, const std::string& what)
      : std::runtime_error(what), reason_(reason) {}
  Reason reason() const { return reason_; }

 private:
  Reason reason_;
};

}  // namespace reachguard
