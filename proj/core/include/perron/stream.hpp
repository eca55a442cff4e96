#pragma once

#include "perron/digit_rule.hpp"
#include "perron/int_map.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <variant>

namespace perron {

/// Every digit after the prefix is the smallest admissible one, r + 1.
struct MinimalTail {};

/// Only the prefix is known.
struct UnknownTail {};

/// Digits produced on demand. The function receives the 1-based position
/// and the prefix built so far; returning nullopt means the generator is
/// exhausted. Digits are validity-checked as they are produced.
class GeneratorTail {
 public:
  using Fn = std::function<std::optional<Integer>(std::size_t position, const PrefixBase& so_far)>;

  /// What is known about the tail without running it forever.
  enum class Shape {
    opaque,
    eventually_minimal,
    infinitely_often_non_minimal,
    periodic,
  };

  GeneratorTail(Fn fn, std::string description, Shape shape = Shape::opaque, std::size_t period = 0);

  std::optional<Integer> operator()(std::size_t position, const PrefixBase& so_far) const {
    return fn_(position, so_far);
  }
  const std::string& description() const noexcept { return description_; }
  Shape shape() const noexcept { return shape_; }
  /// Digit period for Shape::periodic.
  std::size_t period() const noexcept { return period_; }

 private:
  Fn fn_;
  std::string description_;
  Shape shape_;
  std::size_t period_;
};

using Tail = std::variant<MinimalTail, GeneratorTail, UnknownTail>;

Tail minimal_tail();
Tail unknown_tail();
/// digit at position j = r_{j-1} + 1 + offsets(j); always admissible.
Tail offset_tail(IntMap offsets);
/// digit at position j = digits(j); checked lazily.
Tail absolute_tail(IntMap digits);
/// Repeats `cycle`; position `first_position` carries cycle[0].
Tail periodic_tail(std::vector<Integer> cycle, std::size_t first_position);

std::string describe(const Tail& tail);

/// A finite validated prefix plus a tail descriptor: x = Delta_{p1 p2 ...}.
class DigitStream {
 public:
  DigitStream(PrefixBase prefix, Tail tail);

  const PrefixBase& prefix() const noexcept { return prefix_; }
  const Tail& tail() const noexcept { return tail_; }
  const DigitRule& rule() const noexcept { return prefix_.rule(); }

  bool has_minimal_tail() const { return std::holds_alternative<MinimalTail>(tail_); }
  bool has_unknown_tail() const { return std::holds_alternative<UnknownTail>(tail_); }

  /// The first `depth` digits. Throws GeneratorExhausted when the tail cannot
  /// produce them and InvalidDigit when a generated digit is inadmissible.
  PrefixBase digits(std::size_t depth) const;

  /// Largest depth that can be produced without running a generator, i.e.
  /// prefix rank for Unknown tails and unbounded otherwise.
  std::optional<std::size_t> known_depth() const;

  std::string describe() const;

 private:
  PrefixBase prefix_;
  Tail tail_;
};

}  // namespace perron
