#pragma once

#include "perron/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace perron {

/// Indices n = residue, residue + modulus, ... (n >= 1).
struct ResidueClass {
  std::uint64_t modulus = 1;
  std::uint64_t residue = 0;

  bool contains(std::uint64_t n) const { return n % modulus == residue % modulus; }
  /// Smallest member >= from.
  std::uint64_t first_at_least(std::uint64_t from) const;
  std::string describe() const;
};

/// Periodic piecewise polynomial n -> integer. Piece i applies to
/// n = i (mod period). Coefficients are listed constant term first; every
/// coefficient of degree >= 1 is nonnegative, so each piece is
/// nondecreasing in n and either constant or unbounded.
class IntMap {
 public:
  using Poly = std::vector<Integer>;

  IntMap();
  explicit IntMap(std::vector<Poly> pieces);

  static IntMap constant(Integer c);
  /// a*n + b
  static IntMap affine(Integer a, Integer b);
  static IntMap polynomial(Poly coefficients);
  /// base + (n mod modulus)
  static IntMap cyclic(Integer base, std::uint64_t modulus);
  /// Concatenates single-piece maps into one periodic map.
  static IntMap interleave(const std::vector<IntMap>& pieces);

  std::uint64_t period() const noexcept { return pieces_.size(); }
  const std::vector<Poly>& pieces() const noexcept { return pieces_; }

  Integer operator()(std::uint64_t n) const;

  /// Restricted to a residue class whose modulus is a multiple of period():
  /// the constant value, or nullopt when the values grow without bound.
  std::optional<Integer> constant_on(const ResidueClass& cls) const;

  /// True when every piece grows without bound.
  bool tends_to_infinity() const;

  std::string describe() const;

  friend bool operator==(const IntMap& a, const IntMap& b) = default;

 private:
  const Poly& piece_for(std::uint64_t n) const { return pieces_[n % pieces_.size()]; }
  std::vector<Poly> pieces_;
};

std::uint64_t lcm_period(std::uint64_t a, std::uint64_t b);

}  // namespace perron
