#include "perron/errors.hpp"

namespace perron {

InvalidDigit::InvalidDigit(std::size_t index, Integer digit, Integer minimum)
    : Error("invalid digit " + digit.get_str() + " at index " + std::to_string(index) +
            " (minimum " + minimum.get_str() + ")"),
      index_(index),
      digit_(std::move(digit)),
      minimum_(std::move(minimum)) {}

GeneratorExhausted::GeneratorExhausted(std::size_t position)
    : Error("digit stream exhausted at position " + std::to_string(position)), position_(position) {}

Undetermined::Undetermined(std::size_t depth)
    : Error("undetermined after inspecting " + std::to_string(depth) + " digits"), depth_(depth) {}

NoDisagreementUpToDepth::NoDisagreementUpToDepth(std::size_t depth)
    : Error("streams agree on the first " + std::to_string(depth) + " digits"), depth_(depth) {}

}  // namespace perron
