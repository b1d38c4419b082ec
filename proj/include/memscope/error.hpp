#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace memscope {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or out-of-range input (bad config, bad CLI value, bad step).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// The environment exposes no event-recall pairs and cannot test memory.
class UnsuitableEnvironment : public Error {
 public:
  using Error::Error;
};

// min(Xi) == 1: the environment behaves like an MDP.
class NotMemoryIntensive : public Error {
 public:
  using Error::Error;
};

// An experiment design that breaks a memory-validation rule. Carries the
// corrective advice that the CLI prints alongside the message.
class ValidationError : public Error {
 public:
  ValidationError(std::string rule, std::string correction)
      : Error(rule + (correction.empty() ? "" : "; " + correction)),
        rule_(std::move(rule)),
        correction_(std::move(correction)) {}

  const std::string& rule() const noexcept { return rule_; }
  const std::string& correction() const noexcept { return correction_; }

 private:
  std::string rule_;
  std::string correction_;
};

}  // namespace memscope
