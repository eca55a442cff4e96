#pragma once

#include "perron/digit_rule.hpp"

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace perron {

enum class Representation { positive, alternating };

std::string_view to_string(Representation rep);

/// Exact infimum, supremum and diameter of a cylinder.
struct CylinderGeometry {
  Rational inf;
  Rational sup;
  Rational diam;
  std::size_t rank = 0;
  Representation kind = Representation::positive;
};

/// Interval known to contain a number. `exact` is set when the number itself
/// is known as a rational.
struct Enclosure {
  Rational lower;
  Rational upper;
  bool lower_closed = false;
  bool upper_closed = true;
  std::optional<Rational> exact;

  bool contains(const Rational& x) const;
  Rational width() const { return upper - lower; }
};

/// Orbits stop once a digit needs more bits than this; some rational orbits
/// have digits whose length doubles every step or two. 0 disables the check.
inline constexpr std::size_t default_digit_bit_budget = std::size_t{1} << 20;

inline bool exceeds_bit_budget(const Integer& digit, std::size_t budget) {
  return budget != 0 && mpz_sizeinbase(digit.get_mpz_t(), 2) > budget;
}

/// Remainder orbit of a rational under the digit-extraction map. The state
/// (remainder, r) determines the future once the rule is memoryless, so a
/// repeated state proves the orbit is periodic.
struct Orbit {
  /// size_limit: the last digit outgrew the bit budget before max_depth.
  enum class End { depth_limit, endpoint, cycle, size_limit };

  PrefixBase digits;
  /// remainders[j] is the remainder before extracting digit j+1.
  std::vector<Rational> remainders;
  End end = End::depth_limit;
  /// For End::cycle: digits[cycle_start .. cycle_start+cycle_length) repeat.
  std::size_t cycle_start = 0;
  std::size_t cycle_length = 0;
};

}  // namespace perron
