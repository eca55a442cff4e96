#include "perron/stream.hpp"

#include "perron/errors.hpp"

#include <utility>

namespace perron {

GeneratorTail::GeneratorTail(Fn fn, std::string description, Shape shape, std::size_t period)
    : fn_(std::move(fn)), description_(std::move(description)), shape_(shape), period_(period) {}

Tail minimal_tail() { return MinimalTail{}; }

Tail unknown_tail() { return UnknownTail{}; }

Tail offset_tail(IntMap offsets) {
  using Shape = GeneratorTail::Shape;
  bool all_zero = true;
  for (const auto& piece : offsets.pieces()) {
    if (piece.size() > 1 || piece.front() != 0) all_zero = false;
    if (piece.size() == 1 && piece.front() < 0) throw SchemaError("tail offsets must be nonnegative");
  }
  const Shape shape = all_zero ? Shape::eventually_minimal : Shape::infinitely_often_non_minimal;
  std::string text = "offset " + offsets.describe();
  return GeneratorTail(
      [offsets = std::move(offsets)](std::size_t position, const PrefixBase& so_far) -> std::optional<Integer> {
        return so_far.min_next_digit() + offsets(position);
      },
      std::move(text), shape);
}

Tail absolute_tail(IntMap digits) {
  using Shape = GeneratorTail::Shape;
  bool constant_pieces = true;
  for (const auto& piece : digits.pieces()) constant_pieces = constant_pieces && piece.size() == 1;
  const std::size_t period = constant_pieces ? static_cast<std::size_t>(digits.period()) : 0;
  std::string text = "digits " + digits.describe();
  return GeneratorTail(
      [digits = std::move(digits)](std::size_t position, const PrefixBase&) -> std::optional<Integer> {
        return digits(position);
      },
      std::move(text), constant_pieces ? Shape::periodic : Shape::opaque, period);
}

Tail periodic_tail(std::vector<Integer> cycle, std::size_t first_position) {
  if (cycle.empty()) throw SchemaError("periodic tail needs a nonempty cycle");
  std::string text = "periodic (" + format_digits(cycle) + ")";
  const std::size_t period = cycle.size();
  return GeneratorTail(
      [cycle = std::move(cycle), first_position](std::size_t position, const PrefixBase&) -> std::optional<Integer> {
        if (position < first_position) return std::nullopt;
        return cycle[(position - first_position) % cycle.size()];
      },
      std::move(text), GeneratorTail::Shape::periodic, period);
}

std::string describe(const Tail& tail) {
  return std::visit(
      [](const auto& t) -> std::string {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, MinimalTail>) {
          return "minimal";
        } else if constexpr (std::is_same_v<T, UnknownTail>) {
          return "unknown";
        } else {
          return t.description();
        }
      },
      tail);
}

DigitStream::DigitStream(PrefixBase prefix, Tail tail) : prefix_(std::move(prefix)), tail_(std::move(tail)) {}

PrefixBase DigitStream::digits(std::size_t depth) const {
  if (depth <= prefix_.rank()) return prefix_.truncated(depth);
  PrefixBase out = prefix_;
  for (std::size_t position = prefix_.rank() + 1; position <= depth; ++position) {
    std::optional<Integer> next = std::visit(
        [&](const auto& t) -> std::optional<Integer> {
          using T = std::decay_t<decltype(t)>;
          if constexpr (std::is_same_v<T, MinimalTail>) {
            return out.min_next_digit();
          } else if constexpr (std::is_same_v<T, UnknownTail>) {
            return std::nullopt;
          } else {
            return t(position, out);
          }
        },
        tail_);
    if (!next) throw GeneratorExhausted(position);
    out.append(std::move(*next));
  }
  return out;
}

std::optional<std::size_t> DigitStream::known_depth() const {
  if (has_unknown_tail()) return prefix_.rank();
  return std::nullopt;
}

std::string DigitStream::describe() const {
  return "(" + format_digits(prefix_.digits()) + ") + " + perron::describe(tail_);
}

}  // namespace perron
