#pragma once

// Decision procedures for the convergence of symbolically described
// sequences x_n to a target x_0, in terms of P- or P^- digits.
//
// A family describes x_n for every n through integer maps n -> digit (or
// n -> disagreement index), so the "for all n >= n_0" and "lim = infinity"
// quantifiers of the convergence criteria reduce to inspecting each residue
// class modulo the combined period: on a class every map is either constant
// or grows without bound.

#include "perron/alternating.hpp"
#include "perron/positive.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace perron {

// ---------------------------------------------------------------- targets

struct ZeroTarget {};

/// P side: x_0 given by its digit stream. If the stream turns out to be a
/// cylinder supremum the left-sided criterion is used instead.
struct InteriorPoint {
  DigitStream x0;
};
/// P side: x_0 = sup Delta_base, approached from the left.
struct SupremumOf {
  PrefixBase base;
};
/// P side: x_0 = inf Delta_base, approached from the right.
struct InfimumOf {
  PrefixBase base;
};
/// P^- side: x_0 outside IS given by its digit stream.
struct RegularPoint {
  DigitStream x0;
};
/// P^- side: x_0 = sup Delta_base with odd rank, approached from the left.
struct OddSupOf {
  PrefixBase base;
};
/// P^- side: x_0 = inf Delta_base with even rank, approached from the right.
struct EvenInfOf {
  PrefixBase base;
};

using LimitTarget = std::variant<ZeroTarget, InteriorPoint, SupremumOf, InfimumOf, RegularPoint, OddSupOf, EvenInfOf>;

std::string describe(const LimitTarget& target);

// --------------------------------------------------------------- families

/// x_n has digit digits[i](n) at position i+1, followed by `tail`.
struct TemplateFamily {
  std::vector<IntMap> digits;
  Tail tail = minimal_tail();
  std::uint64_t n0 = 1;
};

/// x_n agrees with x_0 before position k(n), has digit p_{k(n)}(x_0) + delta(n)
/// at position k(n), and continues with `tail`.
struct DisagreeFamily {
  IntMap k;
  IntMap delta = IntMap::constant(1);
  Tail tail = minimal_tail();
  std::uint64_t n0 = 1;
};

/// A finite list of values x_1, x_2, ...; only depth-qualified evidence is
/// possible.
struct ExplicitFamily {
  std::vector<Rational> values;
};

using SequenceFamily = std::variant<TemplateFamily, DisagreeFamily, ExplicitFamily>;

/// Digits base, then g(n), then tail.
TemplateFamily prefix_then_digit(const PrefixBase& base, IntMap g, Tail tail = minimal_tail(), std::uint64_t n0 = 1);
/// First digit g(n), then tail.
TemplateFamily first_digit(IntMap g, Tail tail = minimal_tail(), std::uint64_t n0 = 1);

std::string describe(const SequenceFamily& family);

/// The n-th element as a digit stream. `x0` is required for DisagreeFamily.
/// Throws InvalidFamily for inadmissible digits or a zero deviation.
DigitStream family_element(const SequenceFamily& family, const DigitRule& rule, std::uint64_t n,
                           const std::optional<DigitStream>& x0 = std::nullopt);

// --------------------------------------------------------------- verdicts

enum class Proposition {
  p_kn_sufficient,   // k_n -> infinity implies convergence
  p_interior,        // x_0 not an endpoint: convergence iff k_n -> infinity
  p_left_supremum,   // x_0 a supremum, x_n < x_0: iff k_n -> infinity
  p_right_infimum,   // x_0 an infimum, x_n > x_0: prefix eventually fixed, next digit -> infinity
  p_zero,            // x_n -> 0 iff p_1(x_n) -> infinity
  pm_regular,        // x_0 outside IS: iff k_n -> infinity
  pm_zero,           // x_n -> 0 iff q_1(x_n) -> infinity
  pm_odd_supremum,   // x_0 = sup of odd rank, from the left
  pm_even_infimum,   // x_0 = inf of even rank, from the right
};

std::string_view to_string(Proposition p);
std::string_view statement(Proposition p);

enum class Verdict { converges, diverges, undetermined };
std::string_view to_string(Verdict v);

/// Indices start, start + modulus, ... along which |x_n - x_0| >= gap.
struct DivergenceWitness {
  ResidueClass indices;
  std::uint64_t start = 1;
  Rational gap;
  std::string pattern;
};

/// Exact rational bounds on |x_n - x_0|; lower == upper when both values are
/// exactly known.
struct EvidenceRow {
  std::uint64_t n = 0;
  Rational distance_lower;
  Rational distance_upper;
  bool exact = false;
  /// Explicit upper bound from the criterion (converging rows).
  std::optional<Rational> bound;
  /// Separation constant (diverging rows).
  std::optional<Rational> gap;
  std::string note;
  bool holds = true;
};

struct ConvergenceVerdict {
  Verdict verdict = Verdict::undetermined;
  Proposition proposition = Proposition::p_kn_sufficient;
  Representation representation = Representation::positive;
  std::optional<DivergenceWitness> witness;
  std::vector<EvidenceRow> evidence;
  std::string reason;

  /// True when every evidence row satisfies its bound or gap.
  bool evidence_holds() const;
};

struct DecideOptions {
  /// Indices for Converges evidence; empty means 1, 2, 4, ..., 1024.
  std::vector<std::uint64_t> samples;
  /// Digits inspected when classifying a stream target.
  std::size_t classify_depth = 64;
  /// Deepest x_0 enclosure used when certifying a separation gap.
  std::size_t enclosure_depth = 256;
  /// Enclosure depth beyond the digits that determine an element.
  std::size_t extra_depth = 8;
};

std::vector<std::uint64_t> default_samples();

/// Smallest position where the digits differ. Throws NoDisagreementUpToDepth.
std::size_t disagreement_index(const DigitStream& x0, const DigitStream& x, std::size_t max_depth = 256);

/// P-representation criteria. Throws SideMismatch, UnclassifiedTarget,
/// InvalidFamily.
ConvergenceVerdict decide_P(const DigitRule& rule, const LimitTarget& target, const SequenceFamily& family,
                            const DecideOptions& options = {});

/// P^- criteria; the target base parity is checked (SideMismatch).
ConvergenceVerdict decide_Pminus(const DigitRule& rule, const LimitTarget& target, const SequenceFamily& family,
                                 const DecideOptions& options = {});

/// Convergence to 0 from the first digit alone.
ConvergenceVerdict decide_zero(Representation rep, const DigitRule& rule, const SequenceFamily& family,
                               const DecideOptions& options = {});

ConvergenceVerdict decide(Representation rep, const DigitRule& rule, const LimitTarget& target,
                          const SequenceFamily& family, const DecideOptions& options = {});

/// One side of a split explicit family.
struct SplitSide {
  std::vector<std::uint64_t> indices;  // 1-based positions in the input list
  std::vector<Rational> values;
  std::optional<LimitTarget> target;   // nullopt when the side is impossible (x_0 = 1 on the right)
};

struct TwoSidedSplit {
  Representation representation = Representation::positive;
  Rational x0;
  SplitSide left;
  SplitSide right;
};

/// Partitions an explicit family around an endpoint x_0 (P) or an IS member
/// (P^-). Throws SplitUnnecessary for interior x_0, ElementEqualsTarget,
/// OutOfDomain and Undetermined (orbit of x_0 not resolved within max_depth).
TwoSidedSplit two_sided_split(Representation rep, const DigitRule& rule, const ExplicitFamily& family,
                              const Rational& x0, std::size_t max_depth = 256);

/// Depth-qualified reports for both sides; the combined verdict is
/// Undetermined unless a side is empty.
struct SplitReport {
  TwoSidedSplit split;
  std::optional<ConvergenceVerdict> left;
  std::optional<ConvergenceVerdict> right;
};
SplitReport decide_two_sided(Representation rep, const DigitRule& rule, const ExplicitFamily& family,
                             const Rational& x0, const DecideOptions& options = {});

/// Exact |x_n - x_0| for the sampled n. Throws NotExactlyEvaluable unless the
/// elements and x_0 have exact values.
std::vector<Rational> oracle_distance_profile(Representation rep, const DigitRule& rule,
                                              const SequenceFamily& family, const LimitTarget& target,
                                              const std::vector<std::uint64_t>& sample_indices);

/// Exact value of the target point, when it has one.
std::optional<Rational> target_value(Representation rep, const LimitTarget& target);

}  // namespace perron
