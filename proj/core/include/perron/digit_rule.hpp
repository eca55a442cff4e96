#pragma once

// Phi-systems: the sequence of functions phi_n that turns a digit prefix
// c_1..c_n into the integer r_n, and the validated digit prefixes built on
// top of them. Both the positive and the alternating expansion share these.

#include "perron/rational.hpp"

#include <cstddef>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace perron {

/// Parametric shapes for r_n = f(c_n). `parameter` is used by `constant`
/// (r_n = K) and `scaled` (r_n = K * c_n).
enum class RuleTemplate { constant, identity, minus_one, pronic, scaled };

struct TemplateSpec {
  RuleTemplate kind = RuleTemplate::constant;
  Integer parameter = 1;
};

/// Table override: phi_{|prefix|}(prefix) = r.
struct TableEntry {
  std::vector<Integer> prefix;
  Integer r;
};

/// Serializable description of a phi-system.
struct SystemDescriptor {
  std::string name;
  Integer phi0 = 1;
  TemplateSpec rule;
  std::vector<TableEntry> table;
};

std::string template_to_string(const TemplateSpec& spec);
TemplateSpec template_from_string(std::string_view text);

/// A phi-system P = (phi_n). Cheap to copy; immutable after construction.
class DigitRule {
 public:
  /// Validates the descriptor (phi0 >= 1, table values >= 1, template
  /// parameter >= 1). Throws SchemaError.
  explicit DigitRule(SystemDescriptor descriptor);

  const std::string& name() const noexcept;
  const Integer& phi0() const noexcept;
  const SystemDescriptor& descriptor() const noexcept;

  /// phi_n(c_1..c_n) for n = prefix.size(); phi0 for an empty prefix.
  Integer operator()(std::span<const Integer> prefix) const;

  /// Depth from which phi_n depends only on the last digit c_n. Remainder
  /// orbits are Markov from this depth on, so cycle detection is sound there.
  std::size_t memoryless_from() const noexcept;

  friend bool operator==(const DigitRule& a, const DigitRule& b);

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

/// One of: luroth, engel, sylvester, pierce, alt-luroth. Throws UnknownSystem.
DigitRule builtin(std::string_view name);
std::vector<std::string> builtin_names();

/// A validated digit prefix c_1..c_k together with its memoized r-values
/// r_0..r_k and the diameter products used by every cylinder formula.
class PrefixBase {
 public:
  /// The empty prefix (rank 0).
  explicit PrefixBase(DigitRule rule);

  /// Throws InvalidDigit carrying the first offending 1-based index.
  static PrefixBase validate(DigitRule rule, std::vector<Integer> digits);

  const DigitRule& rule() const noexcept { return rule_; }
  std::size_t rank() const noexcept { return digits_.size(); }
  bool empty() const noexcept { return digits_.empty(); }
  const std::vector<Integer>& digits() const noexcept { return digits_; }

  /// 1-based digit access.
  const Integer& digit(std::size_t position) const { return digits_.at(position - 1); }
  const Integer& last_digit() const { return digits_.back(); }

  /// r_i for 0 <= i <= rank().
  const Integer& r(std::size_t i) const { return r_.at(i); }
  const std::vector<Integer>& cached_r() const noexcept { return r_; }

  /// Smallest admissible digit at position rank()+1.
  Integer min_next_digit() const { return r_.back() + 1; }

  /// weight(i) = r_0..r_{i-1} / ((c_1-1)c_1 .. (c_i-1)c_i); weight(0) = 1.
  /// weight(rank()) is the diameter of the cylinder in either representation.
  const Rational& weight(std::size_t i) const { return weight_.at(i); }

  /// Appends a digit; throws InvalidDigit.
  PrefixBase& append(Integer digit);
  PrefixBase extended(Integer digit) const;
  PrefixBase truncated(std::size_t rank) const;
  /// Same prefix with the last digit replaced; throws InvalidDigit.
  PrefixBase with_last_digit(Integer digit) const;

  friend bool operator==(const PrefixBase& a, const PrefixBase& b);

 private:
  DigitRule rule_;
  std::vector<Integer> digits_;
  std::vector<Integer> r_;
  std::vector<Rational> weight_;
};

Integer r_value(const PrefixBase& base);
Integer min_next_digit(const PrefixBase& base);
PrefixBase validate_prefix(std::vector<Integer> digits, const DigitRule& system);
PrefixBase validate_prefix(std::initializer_list<long> digits, const DigitRule& system);

std::string format_digits(const std::vector<Integer>& digits, std::string_view separator = " ");

}  // namespace perron
