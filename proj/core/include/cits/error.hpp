#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cits {

// Root of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An event was scheduled before the current simulated clock.
class CausalityError : public Error {
 public:
  using Error::Error;
};

// Scenario validation failure. path() names the offending JSON location,
// e.g. "rsus[0].area".
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& what)
      : Error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Malformed mobility trace. line() is 1-based, 0 when not line specific.
class TraceError : public Error {
 public:
  TraceError(std::size_t line, const std::string& what)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A handler failed while processing an event; what() carries the event kind,
// time and sequence number ahead of the original message.
class EventError : public Error {
 public:
  using Error::Error;
};

class KpiError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace cits
