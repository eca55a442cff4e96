#pragma once

// Positive Perron expansions (P-representation):
//
//   x = sum_{n>=0} r_0..r_n / ((p_1-1)p_1 .. (p_n-1)p_n p_{n+1}),   x in (0,1],
//
// with r_0 = phi_0, r_n = phi_n(p_1..p_n) and p_n >= r_{n-1} + 1. Cylinders
// are half-open intervals (inf, sup]; the first child of every cylinder sits
// at its supremum and larger digits move towards the infimum.

#include "perron/geometry.hpp"
#include "perron/stream.hpp"

#include <optional>

namespace perron {

CylinderGeometry p_cylinder(const PrefixBase& base);
Rational cyl_inf(const PrefixBase& base);
Rational cyl_sup(const PrefixBase& base);
Rational cyl_diam(const PrefixBase& base);

/// (cyl_inf, cyl_sup] of the rank-`depth` prefix. For streams whose tail is
/// (eventually) minimal the exact value is the supremum of the prefix.
/// Throws GeneratorExhausted.
Enclosure eval_stream(const DigitStream& x, std::size_t depth);

/// r0/p1 < x <= r0/(p1-1).
bool first_digit_bound_check(const Rational& x, const Integer& p1, const Integer& r0);

struct ExtractionStep {
  Integer digit;
  Rational remainder;
};

/// One step of the remainder map on y in (0,1] with leading constant r:
/// digit = floor(r/y) + 1, remainder = (y - r/digit)(digit-1)digit/r.
ExtractionStep positive_step(const Rational& y, const Integer& r);

/// First n P-digits of x in (0,1]. Throws OutOfDomain.
PrefixBase digits_of(const Rational& x, const DigitRule& rule, std::size_t n);

/// Runs the remainder map until the remainder reaches 1 (x is the supremum of
/// the extracted prefix), a state repeats, max_depth digits are produced or a
/// digit exceeds max_digit_bits.
Orbit positive_orbit(const Rational& x, const DigitRule& rule, std::size_t max_depth,
                     std::size_t max_digit_bits = default_digit_bit_budget);

/// Stream for a rational: minimal tail for cylinder endpoints, a periodic
/// tail for cycling orbits, an unknown tail past max_depth otherwise.
DigitStream positive_stream_of(const Rational& x, const DigitRule& rule, std::size_t max_depth = 256);

struct PointClassP {
  enum class Kind { interior, cylinder_supremum, one };

  Kind kind = Kind::interior;
  /// For cylinder_supremum: the shortest prefix whose supremum is x.
  std::optional<PrefixBase> witness;
  std::size_t depth = 0;
  /// False when the verdict only holds for the inspected digits.
  bool conclusive = true;
};

/// Throws Undetermined when the inspected digits end in a minimal run and the
/// tail is unknown or opaque.
PointClassP classify_point_P(const DigitStream& x, std::size_t depth);

/// inf Delta_{c1..ck} == sup Delta_{c1..(ck+1)}.
bool left_neighbor_sup_identity(const PrefixBase& base);

/// A base whose infimum equals sup Delta_base (possibly of another rank);
/// nullopt when sup Delta_base = 1.
std::optional<PrefixBase> supremum_as_infimum(const PrefixBase& base);

}  // namespace perron
