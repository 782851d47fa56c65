#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace speechpanel {

// Base for every error the library raises. Callers that only need a message
// catch this; the subclasses exist where a caller reacts differently.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file or string. `where` is a file path, line, or offset
// description already folded into the message.
class FormatError : public Error {
 public:
  using Error::Error;
};

// An argument outside its documented domain (window = 0, a <= 0, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// The input is well formed but the quantity is undefined for it
// (all-hapax text for Honore, zero variance for Pearson r, ...).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

// A model fit could not be carried out (singular system, missing class).
class FitError : public Error {
 public:
  using Error::Error;
};

// Bracketed tree text that fails to parse; carries the character offset.
class TreeParseError : public FormatError {
 public:
  TreeParseError(const std::string& what, std::size_t offset);
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace speechpanel
