#pragma once

#include <stdexcept>
#include <string>

namespace maxlip {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GridError : Error {
  using Error::Error;
};

// Exponent outside the admissible class, or a pair/splitting constraint
// that does not hold.
struct ExponentError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace maxlip
