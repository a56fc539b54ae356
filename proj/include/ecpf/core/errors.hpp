#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ecpf {

// Malformed file header or declaration. Carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A data row that does not conform to the schema. Carries the 1-based row
// number (data rows only, header excluded).
class RowError : public std::runtime_error {
 public:
  RowError(std::size_t row, const std::string& what)
      : std::runtime_error("row " + std::to_string(row) + ": " + what), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

// Underlying I/O failure while reading a stream.
class StreamError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid generator / framework / plan configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// API misuse, e.g. non-monotonic instance indices fed to a detector.
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace ecpf
