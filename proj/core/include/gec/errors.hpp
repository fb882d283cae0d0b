#pragma once

#include <stdexcept>
#include <string>

namespace gec {

// Bad user input: malformed files, invalid flag values, inconsistent data.
// CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed file content; carries the offending location when known.
class FormatError : public ValidationError {
public:
  explicit FormatError(const std::string& what) : ValidationError(what) {}
  FormatError(const std::string& file, std::size_t line, const std::string& what)
      : ValidationError(file + ":" + std::to_string(line) + ": " + what) {}
};

// Filesystem trouble: missing files, unreadable/unwritable paths.
// CLI maps this to exit code 2.
class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gec
