#pragma once

#include <stdexcept>
#include <string>

namespace freeprod {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Endpoints of 1-cells do not compose, or Bundles/words have mismatched types.
class CompositionError : public Error {
 public:
  using Error::Error;
};

/// A spec is malformed (dangling labels, missing unit, ...), as opposed to
/// well-formed but violating an axiom.
class StructuralError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// An enumeration window was too small to hold a computed decomposition.
class BoundError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class LookupError : public Error {
 public:
  using Error::Error;
};

class LayoutError : public Error {
 public:
  using Error::Error;
};

/// A candidate 2-cell component does not satisfy the naturality constraints.
class NotExtendableError : public Error {
 public:
  using Error::Error;
};

/// Realization was requested over a factor without concrete morphisms.
class UnsupportedFactorError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace freeprod
