#pragma once

#include <stdexcept>
#include <string>

namespace btom {

// Base for all library errors. Subclasses exist so callers can react to a
// specific failure without string-matching messages.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// --- logic ---
class SyntaxError : public Error {
 public:
  using Error::Error;
};
class NameError : public Error {
 public:
  using Error::Error;
};
class ScopeError : public Error {
 public:
  using Error::Error;
};
class UnboundVariable : public Error {
 public:
  using Error::Error;
};

// --- world / planning ---
class IllegalAction : public Error {
 public:
  using Error::Error;
};
class UnknownGem : public Error {
 public:
  using Error::Error;
};

// --- inference ---
class HypothesisSpaceTooLarge : public Error {
 public:
  using Error::Error;
};
class AllHypothesesEliminated : public Error {
 public:
  AllHypothesesEliminated(const std::string& what, int step)
      : Error(what), step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};
class MissingGroundTruth : public Error {
 public:
  using Error::Error;
};

// --- io ---
class ParseError : public Error {
 public:
  using Error::Error;
};
class ValidationError : public Error {
 public:
  using Error::Error;
};
class IoError : public Error {
 public:
  using Error::Error;
};
class SchemaError : public Error {
 public:
  using Error::Error;
};

// --- analysis ---
class InsufficientPairs : public Error {
 public:
  using Error::Error;
};
class ZeroVariance : public Error {
 public:
  using Error::Error;
};
class EmptyCell : public Error {
 public:
  using Error::Error;
};

}  // namespace btom
