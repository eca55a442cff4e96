#pragma once

#include "perron/rational.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>

namespace perron {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Digit at 1-based `index` violates c_index >= r_{index-1} + 1.
class InvalidDigit : public Error {
 public:
  InvalidDigit(std::size_t index, Integer digit, Integer minimum);

  std::size_t index() const noexcept { return index_; }
  const Integer& digit() const noexcept { return digit_; }
  const Integer& minimum() const noexcept { return minimum_; }

 private:
  std::size_t index_;
  Integer digit_;
  Integer minimum_;
};

class UnknownSystem : public Error {
 public:
  using Error::Error;
};

class OutOfDomain : public Error {
 public:
  using Error::Error;
};

class GeneratorExhausted : public Error {
 public:
  explicit GeneratorExhausted(std::size_t position);
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Inspection up to `depth` digits did not settle the question.
class Undetermined : public Error {
 public:
  explicit Undetermined(std::size_t depth);
  std::size_t depth() const noexcept { return depth_; }

 private:
  std::size_t depth_;
};

class NoDisagreementUpToDepth : public Error {
 public:
  explicit NoDisagreementUpToDepth(std::size_t depth);
  std::size_t depth() const noexcept { return depth_; }

 private:
  std::size_t depth_;
};

class SideMismatch : public Error {
 public:
  using Error::Error;
};

class UnclassifiedTarget : public Error {
 public:
  using Error::Error;
};

class InvalidFamily : public Error {
 public:
  using Error::Error;
};

class ElementEqualsTarget : public Error {
 public:
  using Error::Error;
};

class NotExactlyEvaluable : public Error {
 public:
  using Error::Error;
};

class SplitUnnecessary : public Error {
 public:
  using Error::Error;
};

/// Malformed JSON descriptor, spec file or literal.
class SchemaError : public Error {
 public:
  using Error::Error;
};

}  // namespace perron
