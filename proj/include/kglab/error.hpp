#pragma once

#include <stdexcept>
#include <string>

namespace kglab {

// Every failure raised by the library derives from Error. The CLI maps
// InvalidArgument to exit status 2 and everything else to 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition violated by the caller (bad n, k, theta, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A value does not fit the arithmetic the routine relies on.
class RangeError : public Error {
 public:
  using Error::Error;
};

// A configured memory/size/state-space cap would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// A self-check inside a computation failed.
class InternalError : public Error {
 public:
  using Error::Error;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument(what);
}

}  // namespace kglab
