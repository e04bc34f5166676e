#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pedtrack {

// Base of every error raised by the library. Each subclass carries the
// process exit code the CLI maps it to.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual int exit_code() const noexcept { return 2; }
};

class DecodeError : public Error {
 public:
  DecodeError(std::size_t offset, const std::string& what)
      : Error("decode error at byte " + std::to_string(offset) + ": " + what),
        offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class LoadError : public Error {
 public:
  using Error::Error;
};

class BoundsError : public Error {
 public:
  using Error::Error;
};

class EmptyObjectError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class SequencingError : public Error {
 public:
  using Error::Error;
};

class ScriptError : public Error {
 public:
  ScriptError(std::size_t line, const std::string& what)
      : Error(line ? "script line " + std::to_string(line) + ": " + what
                   : "script: " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 1; }
};

class ChartError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace pedtrack
