#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bpyield {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Lode-angle direction undefined (q = 0 or sin 3θ = 0).
class DegenerateDirection : public Error {
 public:
  using Error::Error;
};

/// Gradient requested where the yield function is not differentiable
/// (hydrostatic axis or the ends of the meridian cap).
class DegenerateState : public Error {
 public:
  using Error::Error;
};

/// Apex limit requested for α ∈ {0, 2}, where the surface has a corner.
class CornerCase : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class UnboundedDomain : public Error {
 public:
  using Error::Error;
};

class OutsideCap : public Error {
 public:
  using Error::Error;
};

class EmptySlice : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace bpyield
