#pragma once

// Alternating Perron expansions (P^- representation):
//
//   x = sum_{n>=0} (-1)^n r_0..r_n / ((q_1-1)q_1 .. (q_n-1)q_n (q_{n+1}-1)).
//
// Cylinders are open intervals minus the countable set IS of all cylinder
// endpoints; points of IS have no representation. The orientation of the
// children flips with the parity of the parent rank: children of an
// even-rank cylinder run right-to-left by digit, children of an odd-rank
// cylinder left-to-right.

#include "perron/geometry.hpp"
#include "perron/stream.hpp"

#include <string>
#include <variant>
#include <vector>

namespace perron {

enum class Parity { even, odd };

inline Parity parity_of(std::size_t rank) { return rank % 2 ? Parity::odd : Parity::even; }
std::string_view to_string(Parity parity);

struct PMinusCylinder {
  PrefixBase base;
  CylinderGeometry geometry;
  Parity parity;
};

PMinusCylinder pm_cylinder(const PrefixBase& base);
Rational pm_inf(const PrefixBase& base);
Rational pm_sup(const PrefixBase& base);

/// One step of the alternating remainder map on y in (0,1) with leading
/// constant r: digit = floor(r/y) + 1, remainder = (r/(digit-1) - y)(digit-1)digit/r.
struct AlternatingStep {
  Integer digit;
  Rational remainder;
};
AlternatingStep alternating_step(const Rational& y, const Integer& r);

/// x is the supremum of `witness`, a cylinder of odd rank. `step` is the
/// number of digits extracted before the remainder hit an endpoint.
struct ISMember {
  PrefixBase witness;
  std::size_t step = 0;
};

/// The remainder orbit revisits a state: x has a periodic representation.
struct ISNotMember {
  std::size_t cycle_start = 0;
  std::size_t cycle_length = 0;
  std::vector<Rational> cycle_remainders;
};

/// No endpoint and no cycle within `depth` digits. `size_limited` means the
/// digit bit budget stopped the orbit before the requested depth.
struct ISNotMemberUpToDepth {
  std::size_t depth = 0;
  bool size_limited = false;
};

struct ISResult {
  std::variant<ISMember, ISNotMember, ISNotMemberUpToDepth> outcome;
  /// Digits extracted before the outcome was reached.
  PrefixBase digits;

  bool is_member() const { return std::holds_alternative<ISMember>(outcome); }
  const ISMember* member() const { return std::get_if<ISMember>(&outcome); }
  const ISNotMember* cycle() const { return std::get_if<ISNotMember>(&outcome); }
};

/// First n P^- digits of x in (0,1), or the IS witness when x has none.
/// Throws OutOfDomain.
std::variant<PrefixBase, ISMember> pm_digits_of(const Rational& x, const DigitRule& rule, std::size_t n);

/// Member, NotMember (cycle witness) or NotMemberUpToDepth(max_depth).
ISResult is_member_IS(const Rational& x, const DigitRule& rule, std::size_t max_depth,
                      std::size_t max_digit_bits = default_digit_bit_budget);

/// Remainder orbit; End::endpoint means the remainder reached an endpoint.
Orbit alternating_orbit(const Rational& x, const DigitRule& rule, std::size_t max_depth,
                        std::size_t max_digit_bits = default_digit_bit_budget);

/// Stream for a rational outside IS. Throws OutOfDomain for IS members.
DigitStream alternating_stream_of(const Rational& x, const DigitRule& rule, std::size_t max_depth = 256);

/// Open interval (inf, sup) of the rank-`depth` cylinder.
Enclosure pm_eval_stream(const DigitStream& x, std::size_t depth);

/// An even-rank base whose infimum equals sup Delta_witness for an odd-rank
/// witness; nullopt when that supremum is 1.
std::optional<PrefixBase> even_infimum_base(const PrefixBase& odd_witness);

struct IdentityCheck {
  std::string name;
  std::string statement;
  bool holds = false;
};

/// For odd rank: inf-side neighbor identity, first-child identity and the
/// sup-side identity selected by whether c_k is minimal.
std::vector<IdentityCheck> odd_identities(const PrefixBase& base);
/// For even rank: sup-side neighbor identity, first-child identity and the
/// inf-side identity selected by whether c_k is minimal.
std::vector<IdentityCheck> even_identities(const PrefixBase& base);

}  // namespace perron
