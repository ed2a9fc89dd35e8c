#pragma once

#include <stdexcept>
#include <string>

namespace branchflow {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NegativeWeight : Error {
  using Error::Error;
};

struct MissingBoundaryVertex : Error {
  using Error::Error;
};

struct PreconditionUnmet : Error {
  using Error::Error;
};

struct NoConvergence : Error {
  using Error::Error;
};

struct DegenerateJunction : Error {
  using Error::Error;
};

struct TooLarge : Error {
  using Error::Error;
};

struct Infeasible : Error {
  using Error::Error;
};

struct UnsupportedDimension : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

}  // namespace branchflow
