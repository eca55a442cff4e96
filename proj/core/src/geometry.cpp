#include "perron/geometry.hpp"

namespace perron {

std::string_view to_string(Representation rep) {
  return rep == Representation::positive ? "P" : "Pminus";
}

bool Enclosure::contains(const Rational& x) const {
  const int lo = cmp(x, lower);
  const int hi = cmp(x, upper);
  const bool above = lower_closed ? lo >= 0 : lo > 0;
  const bool below = upper_closed ? hi <= 0 : hi < 0;
  return above && below;
}

}  // namespace perron
