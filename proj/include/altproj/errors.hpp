#pragma once

#include <stdexcept>
#include <string>

namespace altproj {

/// Precondition violated by the caller (bad dimensions, out-of-range parameters).
class InputError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical contract or cross-check did not hold.
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// The requested construction needs more resources than the instance/caps allow.
class CapacityError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed instance file.
class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string& what, int line) : std::runtime_error(what), line_{line} {}
    int line() const noexcept { return line_; }

  private:
    int line_;
};

}  // namespace altproj
