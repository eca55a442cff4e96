#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace perron {

using Integer = mpz_class;
using Rational = mpq_class;

/// Builds a canonical rational from numerator and denominator.
Rational make_rational(const Integer& num, const Integer& den);

/// Parses "p/q" or "p" exactly. Throws SchemaError on malformed input.
Rational parse_rational(std::string_view text);

/// Parses a finite decimal literal such as "0.375" into the exact rational 3/8.
Rational parse_decimal_exact(std::string_view text);

/// Parses an integer literal of arbitrary size, optionally signed.
Integer parse_integer(std::string_view text);

/// "p/q" in lowest terms, or "p" when the denominator is 1.
std::string to_string(const Rational& value);
std::string to_string(const Integer& value);

/// Decimal rendering rounded to nearest at `precision` fractional digits,
/// ties to even.
std::string to_decimal(const Rational& value, int precision);

/// floor(value) for a rational value.
Integer floor_of(const Rational& value);

inline bool is_integer(const Rational& value) { return value.get_den() == 1; }

}  // namespace perron
