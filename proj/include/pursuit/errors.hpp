#pragma once

#include <stdexcept>
#include <string>

namespace pursuit {

// Error families. Each maps onto one process exit code / C API status.
enum class ErrorFamily {
  Config = 2,
  Numeric = 3,
  Collision = 4,
  Precondition = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorFamily family, const std::string& what)
      : std::runtime_error(what), family_(family) {}
  ErrorFamily family() const noexcept { return family_; }

 private:
  ErrorFamily family_;
};

class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error(ErrorFamily::Config, key.empty() ? what : key + ": " + what),
        key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error(ErrorFamily::Numeric, what) {}
};

// Raised when two agents (or an agent and the beacon) come within the
// collocation floor. `first`/`second` are agent indices; second == -1 means the beacon.
class CollisionError : public Error {
 public:
  CollisionError(double t, int first, int second, const std::string& what)
      : Error(ErrorFamily::Collision, what), t_(t), first_(first), second_(second) {}
  double time() const noexcept { return t_; }
  int first() const noexcept { return first_; }
  int second() const noexcept { return second_; }

 private:
  double t_;
  int first_;
  int second_;
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what) : Error(ErrorFamily::Precondition, what) {}
};

}  // namespace pursuit
