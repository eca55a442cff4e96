#include "perron/rational.hpp"

#include "perron/errors.hpp"

#include <cctype>

namespace perron {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

Integer parse_signed(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw SchemaError("malformed number '" + std::string(whole) + "'");
  Integer v(std::string(s), 10);
  return negative ? Integer(-v) : v;
}

}  // namespace

Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw OutOfDomain("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational parse_rational(std::string_view text) {
  const std::string_view s = trim(text);
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rational(parse_signed(s, text));
  const Integer num = parse_signed(s.substr(0, slash), text);
  const std::string_view den_text = s.substr(slash + 1);
  if (!all_digits(den_text)) throw SchemaError("malformed rational '" + std::string(text) + "'");
  const Integer den(std::string(den_text), 10);
  if (den == 0) throw SchemaError("zero denominator in '" + std::string(text) + "'");
  return make_rational(num, den);
}

Rational parse_decimal_exact(std::string_view text) {
  std::string_view s = trim(text);
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  const auto dot = s.find('.');
  std::string_view whole = s.substr(0, dot);
  std::string_view frac = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
  if (whole.empty()) whole = "0";
  if (!all_digits(whole) || (dot != std::string_view::npos && !frac.empty() && !all_digits(frac))) {
    throw SchemaError("malformed decimal '" + std::string(text) + "'");
  }
  Integer num(std::string(whole) + std::string(frac), 10);
  Integer den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
  if (negative) num = -num;
  return make_rational(num, den);
}

Integer parse_integer(std::string_view text) {
  return parse_signed(trim(text), text);
}

std::string to_string(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

std::string to_string(const Integer& value) { return value.get_str(); }

Integer floor_of(const Rational& value) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return q;
}

std::string to_decimal(const Rational& value, int precision) {
  if (precision < 0) precision = 0;
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(precision));
  const bool negative = sgn(value) < 0;
  const Rational scaled = abs(value) * scale;
  Integer q = floor_of(scaled);
  const Rational rest = scaled - q;
  const int cmp_half = cmp(rest, Rational(1, 2));
  if (cmp_half > 0 || (cmp_half == 0 && mpz_odd_p(q.get_mpz_t()))) q += 1;

  std::string digits = q.get_str();
  if (precision > 0) {
    if (digits.size() <= static_cast<std::size_t>(precision)) {
      digits.insert(0, static_cast<std::size_t>(precision) + 1 - digits.size(), '0');
    }
    digits.insert(digits.size() - static_cast<std::size_t>(precision), ".");
  }
  if (negative && q != 0) digits.insert(0, "-");
  return digits;
}

}  // namespace perron
