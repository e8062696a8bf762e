#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gruenwald {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad order, non-finite input, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A series or expansion could not deliver a trustworthy value.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// An iterative root search failed; carries the index of the failing root.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::size_t index)
      : Error(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// A node inside the truncation window has no sample value.
class MissingSampleError : public Error {
 public:
  explicit MissingSampleError(double node)
      : Error("missing sample for node " + std::to_string(node)), node_(node) {}
  double node() const noexcept { return node_; }

 private:
  double node_;
};

/// A structural hypothesis (Hermite-Biehler, phase bound, sandwich) failed a check.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

}  // namespace gruenwald
