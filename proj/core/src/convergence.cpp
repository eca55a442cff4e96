#include "perron/convergence.hpp"

#include "perron/errors.hpp"

#include <algorithm>
#include <sstream>

namespace perron {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

struct Interval {
  Rational lo;
  Rational hi;
  bool exact = false;
};

Interval as_interval(const Enclosure& e) {
  if (e.exact) return {*e.exact, *e.exact, true};
  return {e.lower, e.upper, false};
}

Interval exact_interval(const Rational& v) { return {v, v, true}; }

struct Distance {
  Rational lo;
  Rational hi;
  bool exact = false;
};

Distance distance_between(const Interval& a, const Interval& b) {
  Rational lo = 0;
  if (a.lo - b.hi > lo) lo = a.lo - b.hi;
  if (b.lo - a.hi > lo) lo = b.lo - a.hi;
  Rational hi = a.hi - b.lo;
  if (b.hi - a.lo > hi) hi = b.hi - a.lo;
  return {lo, hi, a.exact && b.exact};
}

CylinderGeometry geometry_of(Representation rep, const PrefixBase& base) {
  return rep == Representation::positive ? p_cylinder(base) : pm_cylinder(base).geometry;
}

Interval stream_interval(Representation rep, const DigitStream& s, std::size_t depth) {
  if (rep == Representation::positive) return as_interval(eval_stream(s, depth));
  return as_interval(pm_eval_stream(s, depth));
}

/// Whether a larger digit at `position` moves the value to the right.
bool larger_digit_moves_right(Representation rep, std::size_t position) {
  if (rep == Representation::positive) return false;
  return position % 2 == 0;
}

enum class Side { left, right };

std::string_view side_name(Side s) { return s == Side::left ? "left" : "right"; }

// First class member >= start at which the growing map exceeds `value`.
std::uint64_t first_exceeding(const IntMap& map, const ResidueClass& cls, std::uint64_t start, const Integer& value) {
  auto at = [&](std::uint64_t j) { return start + cls.modulus * j; };
  if (map(at(0)) > value) return at(0);
  std::uint64_t hi = 1;
  while (!(map(at(hi)) > value)) hi *= 2;
  std::uint64_t lo = hi / 2;
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (map(at(mid)) > value) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return at(hi);
}

std::uint64_t family_period(const SequenceFamily& family) {
  return std::visit(overloaded{
                        [](const TemplateFamily& f) {
                          std::uint64_t p = 1;
                          for (const auto& m : f.digits) p = lcm_period(p, m.period());
                          return p;
                        },
                        [](const DisagreeFamily& f) { return lcm_period(f.k.period(), f.delta.period()); },
                        [](const ExplicitFamily&) { return std::uint64_t{1}; },
                    },
                    family);
}

std::uint64_t family_n0(const SequenceFamily& family) {
  return std::visit(overloaded{
                        [](const TemplateFamily& f) { return std::max<std::uint64_t>(f.n0, 1); },
                        [](const DisagreeFamily& f) { return std::max<std::uint64_t>(f.n0, 1); },
                        [](const ExplicitFamily&) { return std::uint64_t{1}; },
                    },
                    family);
}

std::string digits_text(const PrefixBase& base) { return "(" + format_digits(base.digits(), ",") + ")"; }

// Result of inspecting one residue class.
struct ClassOutcome {
  Verdict kind = Verdict::undetermined;
  ResidueClass cls;
  std::uint64_t start = 1;
  Rational gap;
  std::string pattern;
};

ConvergenceVerdict combine(std::vector<ClassOutcome> outcomes, Proposition prop, Representation rep) {
  ConvergenceVerdict v;
  v.proposition = prop;
  v.representation = rep;
  for (auto& o : outcomes) {
    if (o.kind == Verdict::diverges) {
      v.verdict = Verdict::diverges;
      v.witness = DivergenceWitness{o.cls, o.start, o.gap, o.pattern};
      v.reason = o.pattern + " on " + o.cls.describe() + ", n >= " + std::to_string(o.start);
      return v;
    }
  }
  for (auto& o : outcomes) {
    if (o.kind == Verdict::undetermined) {
      v.verdict = Verdict::undetermined;
      v.reason = o.pattern + " on " + o.cls.describe();
      return v;
    }
  }
  v.verdict = Verdict::converges;
  v.reason = outcomes.size() == 1 ? outcomes.front().pattern : "every residue class: " + outcomes.front().pattern;
  return v;
}

std::vector<std::uint64_t> witness_indices(const DivergenceWitness& w) {
  std::vector<std::uint64_t> out{w.start};
  for (std::uint64_t m = 1; m <= 512; m *= 2) out.push_back(w.start + w.indices.modulus * m);
  return out;
}

std::vector<std::uint64_t> converge_indices(const DecideOptions& options, std::uint64_t n0) {
  std::vector<std::uint64_t> out;
  for (auto n : options.samples.empty() ? default_samples() : options.samples) {
    if (n >= n0) out.push_back(n);
  }
  return out;
}

DigitStream element_checked(const SequenceFamily& family, const DigitRule& rule, std::uint64_t n,
                            const std::optional<DigitStream>& x0) {
  return family_element(family, rule, n, x0);
}

std::size_t template_length(const SequenceFamily& family) {
  if (auto* t = std::get_if<TemplateFamily>(&family)) return t->digits.size();
  return 0;
}

// ------------------------------------------------------------ kn targets

struct KnTarget {
  Proposition prop;
  DigitStream x0;
  std::optional<Rational> x0_exact;
  std::optional<Side> side;  // required side of the elements, if any
};

// Positive lower bound on the distance from x0 to anything outside the
// rank-K cylinder of x0, if one can be certified.
std::optional<Rational> separation_gap(Representation rep, const KnTarget& t, std::size_t K,
                                       const DecideOptions& options) {
  const CylinderGeometry g = geometry_of(rep, t.x0.digits(K));
  if (t.side == Side::left && t.x0_exact) {
    Rational gap = *t.x0_exact - g.inf;
    if (sgn(gap) > 0) return gap;
    return std::nullopt;
  }
  for (std::size_t depth = K + 1;; depth = std::min(options.enclosure_depth, depth * 2)) {
    const Interval x = t.x0_exact ? exact_interval(*t.x0_exact) : stream_interval(rep, t.x0, depth);
    Rational a = x.lo - g.inf;
    Rational b = g.sup - x.hi;
    Rational gap = a < b ? a : b;
    if (sgn(gap) > 0) return gap;
    if (x.exact || depth >= options.enclosure_depth) return std::nullopt;
  }
}

ClassOutcome kn_diverging_class(Representation rep, const KnTarget& t, const ResidueClass& cls, std::uint64_t start,
                                std::size_t K, bool moves_right, const DecideOptions& options,
                                const std::string& how) {
  if (t.side) {
    const Side actual = moves_right ? Side::right : Side::left;
    if (actual != *t.side) {
      throw SideMismatch("elements on " + cls.describe() + " lie to the " + std::string(side_name(actual)) +
                         " of x0 but the criterion needs the " + std::string(side_name(*t.side)));
    }
  }
  ClassOutcome o;
  o.cls = cls;
  o.start = start;
  auto gap = separation_gap(rep, t, K, options);
  if (!gap) {
    o.kind = Verdict::undetermined;
    o.pattern = "k_n = " + std::to_string(K) + " but no separation from the rank-" + std::to_string(K) +
                " cylinder of x0 could be certified";
    return o;
  }
  o.kind = Verdict::diverges;
  o.gap = *gap;
  o.pattern = how + "; x_n stays outside the rank-" + std::to_string(K) + " cylinder of x0";
  return o;
}

ConvergenceVerdict kn_decide(Representation rep, const DigitRule& rule, const KnTarget& t,
                             const SequenceFamily& family, const DecideOptions& options) {
  const std::uint64_t L = family_period(family);
  const std::uint64_t n0 = family_n0(family);
  std::vector<ClassOutcome> outcomes;

  for (std::uint64_t r = 0; r < L; ++r) {
    const ResidueClass cls{L, r};
    std::uint64_t start = cls.first_at_least(n0);

    if (auto* f = std::get_if<DisagreeFamily>(&family)) {
      const auto dc = f->delta.constant_on(cls);
      bool positive = true;
      if (dc) {
        if (*dc == 0) throw InvalidFamily("deviation is 0 on " + cls.describe());
        positive = *dc > 0;
      } else {
        start = first_exceeding(f->delta, cls, start, Integer(0));
      }
      const auto kc = f->k.constant_on(cls);
      if (!kc) {
        if (t.side && !positive && rep == Representation::positive) {
          throw SideMismatch("negative deviation puts x_n to the right of x0; the criterion needs the left");
        }
        ClassOutcome o;
        o.kind = Verdict::converges;
        o.cls = cls;
        o.start = start;
        o.pattern = "k_n = " + f->k.describe() + " -> infinity";
        outcomes.push_back(std::move(o));
        continue;
      }
      if (*kc < 1) throw InvalidFamily("disagreement index must be >= 1");
      const std::size_t K = kc->get_ui();
      const bool moves_right = larger_digit_moves_right(rep, K) == positive;
      outcomes.push_back(kn_diverging_class(rep, t, cls, start, K, moves_right, options,
                                            "k_n = " + std::to_string(K) + " is bounded"));
      continue;
    }

    const auto& f = std::get<TemplateFamily>(family);
    std::optional<ClassOutcome> decided;
    for (std::size_t i = 1; i <= f.digits.size() && !decided; ++i) {
      const Integer expected = t.x0.digits(i).digit(i);
      const auto v = f.digits[i - 1].constant_on(cls);
      if (v && *v == expected) continue;
      bool larger = true;
      if (v) {
        larger = *v > expected;
      } else {
        start = first_exceeding(f.digits[i - 1], cls, start, expected);
      }
      const bool moves_right = larger_digit_moves_right(rep, i) == larger;
      decided = kn_diverging_class(rep, t, cls, start, i, moves_right, options,
                                   "digit " + std::to_string(i) + " differs from x0 for every n in the class");
    }
    if (!decided) {
      // Every template digit matches x0, so x_n is the same point for all n in the class.
      const DigitStream e = element_checked(family, rule, start, t.x0);
      std::size_t K = 0;
      try {
        K = disagreement_index(t.x0, e, options.enclosure_depth);
      } catch (const NoDisagreementUpToDepth&) {
        throw InvalidFamily("elements on " + cls.describe() + " coincide with x0 up to depth " +
                            std::to_string(options.enclosure_depth));
      }
      const bool larger = e.digits(K).digit(K) > t.x0.digits(K).digit(K);
      const bool moves_right = larger_digit_moves_right(rep, K) == larger;
      decided = kn_diverging_class(rep, t, cls, start, K, moves_right, options,
                                   "x_n is constant on the class with k_n = " + std::to_string(K));
    }
    outcomes.push_back(std::move(*decided));
  }

  ConvergenceVerdict v = combine(std::move(outcomes), t.prop, rep);
  if (t.prop == Proposition::p_kn_sufficient && v.verdict == Verdict::converges) {
    v.reason += " (sufficient condition)";
  }

  if (v.verdict == Verdict::converges) {
    for (auto n : converge_indices(options, n0)) {
      const DigitStream e = element_checked(family, rule, n, t.x0);
      const std::size_t K = disagreement_index(t.x0, e, std::max<std::size_t>(options.enclosure_depth, 4096));
      const std::size_t depth = K + options.extra_depth;
      const Interval xi = stream_interval(rep, e, depth);
      const Interval x0i = t.x0_exact ? exact_interval(*t.x0_exact) : stream_interval(rep, t.x0, depth);
      const Distance d = distance_between(xi, x0i);
      EvidenceRow row{n, d.lo, d.hi, d.exact, geometry_of(rep, t.x0.digits(K - 1)).diam, std::nullopt,
                      "k_n = " + std::to_string(K), true};
      row.holds = d.hi <= *row.bound && sgn(d.hi) > 0;
      v.evidence.push_back(std::move(row));
    }
  } else if (v.verdict == Verdict::diverges) {
    for (auto n : witness_indices(*v.witness)) {
      const DigitStream e = element_checked(family, rule, n, t.x0);
      const std::size_t K = disagreement_index(t.x0, e, options.enclosure_depth);
      const std::size_t depth = std::max(K, template_length(family)) + options.extra_depth;
      const Interval xi = stream_interval(rep, e, depth);
      const Interval x0i = t.x0_exact ? exact_interval(*t.x0_exact) : stream_interval(rep, t.x0, options.enclosure_depth);
      const Distance d = distance_between(xi, x0i);
      EvidenceRow row{n, d.lo, d.hi, d.exact, std::nullopt, v.witness->gap, "k_n = " + std::to_string(K), true};
      row.holds = d.lo >= v.witness->gap;
      v.evidence.push_back(std::move(row));
    }
  }
  return v;
}

// ------------------------------------------------------ endpoint targets

struct EndpointTarget {
  Proposition prop;
  PrefixBase base;
  Side side;
  Rational x0;
};

Rational case2_constant(const PrefixBase& base, const Integer& denominator) {
  return base.weight(base.rank()) * Rational(base.r(base.rank())) / Rational(denominator);
}

ConvergenceVerdict endpoint_decide(Representation rep, const DigitRule& rule, const EndpointTarget& t,
                                   const SequenceFamily& family, const DecideOptions& options) {
  const auto* f = std::get_if<TemplateFamily>(&family);
  if (!f) throw InvalidFamily("one-sided endpoint targets need a digit-template family");
  const std::size_t k = t.base.rank();
  const std::uint64_t L = family_period(family);
  const std::uint64_t n0 = family_n0(family);
  const Rational diam = geometry_of(rep, t.base).diam;
  std::vector<ClassOutcome> outcomes;

  for (std::uint64_t r = 0; r < L; ++r) {
    const ResidueClass cls{L, r};
    std::uint64_t start = cls.first_at_least(n0);
    ClassOutcome o;
    o.cls = cls;
    bool done = false;
    for (std::size_t i = 1; i <= k + 1 && !done; ++i) {
      std::optional<Integer> v;
      if (i <= f->digits.size()) {
        v = f->digits[i - 1].constant_on(cls);
      } else {
        // Digits so far are constant on the class, so the tail digit is too.
        v = element_checked(family, rule, start, std::nullopt).digits(i).digit(i);
      }
      if (i == k + 1) {
        done = true;
        if (!v) {
          o.kind = Verdict::converges;
          o.pattern = "digits 1.." + std::to_string(k) + " fixed to " + digits_text(t.base) + ", digit " +
                      std::to_string(k + 1) + " = " + f->digits[k].describe() + " -> infinity";
        } else {
          o.kind = Verdict::diverges;
          o.gap = case2_constant(t.base, *v);
          o.pattern = "digits 1.." + std::to_string(k) + " fixed but digit " + std::to_string(k + 1) + " stays " +
                      v->get_str() + " (bounded)";
        }
        break;
      }
      const Integer& expected = t.base.digit(i);
      if (v && *v == expected) continue;
      bool larger = true;
      if (v) {
        larger = *v > expected;
      } else {
        start = first_exceeding(f->digits[i - 1], cls, start, expected);
      }
      const Side actual = larger_digit_moves_right(rep, i) == larger ? Side::right : Side::left;
      if (actual != t.side) {
        throw SideMismatch("elements on " + cls.describe() + " lie to the " + std::string(side_name(actual)) +
                           " of x0 = " + to_string(t.x0) + " but the criterion needs the " +
                           std::string(side_name(t.side)));
      }
      done = true;
      o.kind = Verdict::diverges;
      o.gap = diam;
      o.pattern = "digit " + std::to_string(i) + " differs from " + expected.get_str() + ", so x_n leaves " +
                  digits_text(t.base);
    }
    o.start = start;
    outcomes.push_back(std::move(o));
  }

  ConvergenceVerdict v = combine(std::move(outcomes), t.prop, rep);
  const std::size_t depth = std::max(k + 1, f->digits.size()) + options.extra_depth;
  if (v.verdict == Verdict::converges) {
    for (auto n : converge_indices(options, n0)) {
      const DigitStream e = element_checked(family, rule, n, std::nullopt);
      const PrefixBase head = e.digits(k + 1);
      const Distance d = distance_between(stream_interval(rep, e, depth), exact_interval(t.x0));
      EvidenceRow row{n, d.lo, d.hi, d.exact, std::nullopt, std::nullopt,
                      "digit " + std::to_string(k + 1) + " = " + head.last_digit().get_str(), true};
      if (head.truncated(k) == t.base) {
        row.bound = case2_constant(t.base, head.last_digit() - 1);
        row.holds = d.hi <= *row.bound && sgn(d.lo) >= 0;
      } else {
        row.holds = false;
        row.note += " (prefix differs)";
      }
      v.evidence.push_back(std::move(row));
    }
  } else if (v.verdict == Verdict::diverges) {
    for (auto n : witness_indices(*v.witness)) {
      const DigitStream e = element_checked(family, rule, n, std::nullopt);
      const Distance d = distance_between(stream_interval(rep, e, depth), exact_interval(t.x0));
      EvidenceRow row{n, d.lo, d.hi, d.exact, std::nullopt, v.witness->gap, "", true};
      row.note = "digits " + digits_text(e.digits(k + 1));
      row.holds = d.lo >= v.witness->gap;
      v.evidence.push_back(std::move(row));
    }
  }
  return v;
}

// ------------------------------------------------------------------ zero

ConvergenceVerdict zero_decide(Representation rep, const DigitRule& rule, const SequenceFamily& family,
                               const DecideOptions& options) {
  const auto* f = std::get_if<TemplateFamily>(&family);
  if (!f) throw InvalidFamily("convergence to 0 needs a digit-template family");
  const Proposition prop = rep == Representation::positive ? Proposition::p_zero : Proposition::pm_zero;
  const Rational r0 = Rational(rule.phi0());
  const std::uint64_t L = family_period(family);
  const std::uint64_t n0 = family_n0(family);
  std::vector<ClassOutcome> outcomes;
  for (std::uint64_t r = 0; r < L; ++r) {
    ClassOutcome o;
    o.cls = ResidueClass{L, r};
    o.start = o.cls.first_at_least(n0);
    std::optional<Integer> v;
    if (!f->digits.empty()) {
      v = f->digits[0].constant_on(o.cls);
    } else {
      v = element_checked(family, rule, o.start, std::nullopt).digits(1).digit(1);
    }
    if (!v) {
      o.kind = Verdict::converges;
      o.pattern = "first digit " + f->digits[0].describe() + " -> infinity";
    } else {
      o.kind = Verdict::diverges;
      o.gap = r0 / Rational(*v);
      o.pattern = "first digit stays " + v->get_str();
    }
    outcomes.push_back(std::move(o));
  }
  ConvergenceVerdict v = combine(std::move(outcomes), prop, rep);
  const std::size_t depth = std::max<std::size_t>(1, f->digits.size()) + options.extra_depth;
  auto row_for = [&](std::uint64_t n) {
    const DigitStream e = element_checked(family, rule, n, std::nullopt);
    const Integer p1 = e.digits(1).digit(1);
    const Interval xi = stream_interval(rep, e, depth);
    const bool enclosed = xi.lo >= r0 / Rational(p1) && xi.hi <= r0 / Rational(p1 - 1);
    return std::make_tuple(xi, p1, enclosed);
  };
  if (v.verdict == Verdict::converges) {
    for (auto n : converge_indices(options, n0)) {
      auto [xi, p1, enclosed] = row_for(n);
      EvidenceRow row{n, xi.lo, xi.hi, xi.exact, r0 / Rational(p1 - 1), std::nullopt,
                      "first digit " + p1.get_str(), true};
      row.holds = enclosed && xi.hi <= *row.bound;
      v.evidence.push_back(std::move(row));
    }
  } else if (v.verdict == Verdict::diverges) {
    for (auto n : witness_indices(*v.witness)) {
      auto [xi, p1, enclosed] = row_for(n);
      EvidenceRow row{n, xi.lo, xi.hi, xi.exact, std::nullopt, v.witness->gap, "first digit " + p1.get_str(), true};
      row.holds = enclosed && xi.lo >= v.witness->gap;
      v.evidence.push_back(std::move(row));
    }
  }
  return v;
}

// -------------------------------------------------------------- explicit

// Digits of a rational element, rejecting IS members on the P^- side.
PrefixBase element_digits(Representation rep, const DigitRule& rule, const Rational& x, std::size_t n) {
  if (rep == Representation::positive) return digits_of(x, rule, n);
  auto d = pm_digits_of(x, rule, n);
  if (auto* m = std::get_if<ISMember>(&d)) {
    throw InvalidFamily(to_string(x) + " is the supremum of " + digits_text(m->witness) +
                        " and has no P^- representation");
  }
  return std::get<PrefixBase>(d);
}

void check_element_domain(Representation rep, const Rational& x) {
  const bool ok = rep == Representation::positive ? (sgn(x) > 0 && x <= 1) : (sgn(x) > 0 && x < 1);
  if (!ok) throw OutOfDomain("sequence element " + to_string(x) + " outside the domain");
}

ConvergenceVerdict explicit_report(Representation rep, const DigitRule& rule, const LimitTarget& target,
                                   const ExplicitFamily& family, Proposition prop,
                                   const std::vector<std::uint64_t>& indices) {
  ConvergenceVerdict v;
  v.representation = rep;
  v.proposition = prop;
  v.verdict = Verdict::undetermined;
  v.reason = "finite list of " + std::to_string(family.values.size()) + " elements: evidence only";
  const Rational r0 = Rational(rule.phi0());
  const std::optional<Rational> x0 = target_value(rep, target);

  for (std::size_t j = 0; j < family.values.size(); ++j) {
    const Rational& x = family.values[j];
    const std::uint64_t n = indices.empty() ? j + 1 : indices[j];
    check_element_domain(rep, x);
    if (x0 && x == *x0) throw ElementEqualsTarget("element " + std::to_string(n) + " equals x0 = " + to_string(x));
    EvidenceRow row;
    row.n = n;
    std::visit(
        overloaded{
            [&](const ZeroTarget&) {
              const Integer p1 = element_digits(rep, rule, x, 1).digit(1);
              row.distance_lower = row.distance_upper = x;
              row.exact = true;
              row.bound = r0 / Rational(p1 - 1);
              row.note = "first digit " + p1.get_str();
              row.holds = x <= *row.bound;
            },
            [&](const auto& t) {
              using T = std::decay_t<decltype(t)>;
              if constexpr (std::is_same_v<T, InteriorPoint> || std::is_same_v<T, RegularPoint> ||
                            std::is_same_v<T, SupremumOf>) {
                DigitStream x0s = [&] {
                  if constexpr (std::is_same_v<T, SupremumOf>) {
                    return DigitStream(t.base, minimal_tail());
                  } else {
                    return t.x0;
                  }
                }();
                const DigitStream xs(element_digits(rep, rule, x, 64), unknown_tail());
                std::size_t K = 0;
                try {
                  K = disagreement_index(x0s, xs, 64);
                } catch (const NoDisagreementUpToDepth&) {
                  row.note = "agrees with x0 on 64 digits";
                  K = 65;
                }
                const Interval x0i = x0 ? exact_interval(*x0) : stream_interval(rep, x0s, std::min<std::size_t>(K + 8, 72));
                const Distance d = distance_between(exact_interval(x), x0i);
                row.distance_lower = d.lo;
                row.distance_upper = d.hi;
                row.exact = d.exact;
                row.bound = geometry_of(rep, x0s.digits(K - 1)).diam;
                if (row.note.empty()) row.note = "k_n = " + std::to_string(K);
                row.holds = d.hi <= *row.bound;
                if constexpr (std::is_same_v<T, SupremumOf>) {
                  if (!(x < *x0)) throw SideMismatch("element " + to_string(x) + " is not left of x0");
                }
              } else {
                const PrefixBase& base = t.base;
                const std::size_t k = base.rank();
                const bool want_right = std::is_same_v<T, InfimumOf> || std::is_same_v<T, EvenInfOf>;
                if ((x > *x0) != want_right) {
                  throw SideMismatch("element " + to_string(x) + " is on the wrong side of x0 = " + to_string(*x0));
                }
                const PrefixBase head = element_digits(rep, rule, x, k + 1);
                const Rational dist = want_right ? x - *x0 : *x0 - x;
                row.distance_lower = row.distance_upper = dist;
                row.exact = true;
                if (head.truncated(k) == base) {
                  row.bound = case2_constant(base, head.last_digit() - 1);
                  row.note = "prefix fixed, digit " + std::to_string(k + 1) + " = " + head.last_digit().get_str();
                  row.holds = dist <= *row.bound;
                } else {
                  row.gap = geometry_of(rep, base).diam;
                  row.note = "outside " + digits_text(base);
                  row.holds = dist > *row.gap;
                }
              }
            },
        },
        target);
    v.evidence.push_back(std::move(row));
  }
  return v;
}

Proposition governing_explicit(Representation rep, const LimitTarget& target) {
  const bool p = rep == Representation::positive;
  return std::visit(overloaded{
                        [&](const ZeroTarget&) { return p ? Proposition::p_zero : Proposition::pm_zero; },
                        [](const InteriorPoint&) { return Proposition::p_interior; },
                        [](const SupremumOf&) { return Proposition::p_left_supremum; },
                        [](const InfimumOf&) { return Proposition::p_right_infimum; },
                        [](const RegularPoint&) { return Proposition::pm_regular; },
                        [](const OddSupOf&) { return Proposition::pm_odd_supremum; },
                        [](const EvenInfOf&) { return Proposition::pm_even_infimum; },
                    },
                    target);
}

void require_rank_parity(const PrefixBase& base, bool odd, const char* what) {
  if (base.empty() || (base.rank() % 2 == 1) != odd) {
    throw SideMismatch(std::string(what) + " needs a base of " + (odd ? "odd" : "even positive") + " rank, got rank " +
                       std::to_string(base.rank()));
  }
}

}  // namespace

// ------------------------------------------------------------ public API

std::string describe(const LimitTarget& target) {
  return std::visit(overloaded{
                        [](const ZeroTarget&) { return std::string("0"); },
                        [](const InteriorPoint& t) { return "point " + t.x0.describe(); },
                        [](const SupremumOf& t) { return "sup " + digits_text(t.base) + " from the left"; },
                        [](const InfimumOf& t) { return "inf " + digits_text(t.base) + " from the right"; },
                        [](const RegularPoint& t) { return "point " + t.x0.describe(); },
                        [](const OddSupOf& t) { return "sup " + digits_text(t.base) + " from the left"; },
                        [](const EvenInfOf& t) { return "inf " + digits_text(t.base) + " from the right"; },
                    },
                    target);
}

TemplateFamily prefix_then_digit(const PrefixBase& base, IntMap g, Tail tail, std::uint64_t n0) {
  TemplateFamily f;
  for (const auto& d : base.digits()) f.digits.push_back(IntMap::constant(d));
  f.digits.push_back(std::move(g));
  f.tail = std::move(tail);
  f.n0 = n0;
  return f;
}

TemplateFamily first_digit(IntMap g, Tail tail, std::uint64_t n0) {
  TemplateFamily f;
  f.digits.push_back(std::move(g));
  f.tail = std::move(tail);
  f.n0 = n0;
  return f;
}

std::string describe(const SequenceFamily& family) {
  return std::visit(overloaded{
                        [](const TemplateFamily& f) {
                          std::string out = "digits (";
                          for (std::size_t i = 0; i < f.digits.size(); ++i) {
                            if (i) out += ", ";
                            out += f.digits[i].describe();
                          }
                          out += ") then " + describe(f.tail);
                          if (f.n0 > 1) out += ", n >= " + std::to_string(f.n0);
                          return out;
                        },
                        [](const DisagreeFamily& f) {
                          std::string out = "disagree at k_n = " + f.k.describe() + " by " + f.delta.describe() +
                                            ", then " + describe(f.tail);
                          if (f.n0 > 1) out += ", n >= " + std::to_string(f.n0);
                          return out;
                        },
                        [](const ExplicitFamily& f) { return std::to_string(f.values.size()) + " explicit values"; },
                    },
                    family);
}

DigitStream family_element(const SequenceFamily& family, const DigitRule& rule, std::uint64_t n,
                           const std::optional<DigitStream>& x0) {
  try {
    return std::visit(
        overloaded{
            [&](const TemplateFamily& f) {
              std::vector<Integer> digits;
              digits.reserve(f.digits.size());
              for (const auto& m : f.digits) digits.push_back(m(n));
              return DigitStream(PrefixBase::validate(rule, std::move(digits)), f.tail);
            },
            [&](const DisagreeFamily& f) {
              if (!x0) throw InvalidFamily("a disagreement family needs the target stream");
              const Integer k = f.k(n);
              if (k < 1) throw InvalidFamily("disagreement index must be >= 1");
              const Integer delta = f.delta(n);
              if (delta == 0) throw InvalidFamily("deviation is 0 at n = " + std::to_string(n));
              const std::size_t K = k.get_ui();
              PrefixBase head = x0->digits(K);
              const Integer digit = head.digit(K) + delta;
              PrefixBase prefix = head.truncated(K - 1);
              prefix.append(digit);
              return DigitStream(std::move(prefix), f.tail);
            },
            [&](const ExplicitFamily& f) -> DigitStream {
              (void)f;
              throw InvalidFamily("explicit values are not digit streams");
            },
        },
        family);
  } catch (const InvalidDigit& e) {
    throw InvalidFamily("element n = " + std::to_string(n) + ": " + e.what());
  }
}

std::string_view to_string(Proposition p) {
  switch (p) {
    case Proposition::p_kn_sufficient: return "P.kn-sufficient";
    case Proposition::p_interior: return "P.interior";
    case Proposition::p_left_supremum: return "P.left-supremum";
    case Proposition::p_right_infimum: return "P.right-infimum";
    case Proposition::p_zero: return "P.zero";
    case Proposition::pm_regular: return "Pminus.regular";
    case Proposition::pm_zero: return "Pminus.zero";
    case Proposition::pm_odd_supremum: return "Pminus.odd-supremum";
    case Proposition::pm_even_infimum: return "Pminus.even-infimum";
  }
  return "?";
}

std::string_view statement(Proposition p) {
  switch (p) {
    case Proposition::p_kn_sufficient: return "if k_n -> infinity then x_n -> x0";
    case Proposition::p_interior: return "x0 not a cylinder endpoint: x_n -> x0 iff k_n -> infinity";
    case Proposition::p_left_supremum: return "x0 a cylinder supremum, x_n < x0: x_n -> x0 iff k_n -> infinity";
    case Proposition::p_right_infimum:
      return "x0 = inf of (c1..ck), x_n > x0: x_n -> x0 iff eventually p_i(x_n) = c_i for i <= k and "
             "p_{k+1}(x_n) -> infinity";
    case Proposition::p_zero: return "x_n -> 0 iff p_1(x_n) -> infinity";
    case Proposition::pm_regular: return "x0 outside IS: x_n -> x0 iff k_n -> infinity";
    case Proposition::pm_zero: return "x_n -> 0 iff q_1(x_n) -> infinity";
    case Proposition::pm_odd_supremum:
      return "x0 = sup of (c1..ck), k odd, x_n < x0: x_n -> x0 iff eventually q_i(x_n) = c_i for i <= k and "
             "q_{k+1}(x_n) -> infinity";
    case Proposition::pm_even_infimum:
      return "x0 = inf of (c1..ck), k even, x_n > x0: x_n -> x0 iff eventually q_i(x_n) = c_i for i <= k and "
             "q_{k+1}(x_n) -> infinity";
  }
  return "?";
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::converges: return "Converges";
    case Verdict::diverges: return "Diverges";
    case Verdict::undetermined: return "Undetermined";
  }
  return "?";
}

bool ConvergenceVerdict::evidence_holds() const {
  return std::all_of(evidence.begin(), evidence.end(), [](const EvidenceRow& r) { return r.holds; });
}

std::vector<std::uint64_t> default_samples() {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 1; n <= 1024; n *= 2) out.push_back(n);
  return out;
}

std::size_t disagreement_index(const DigitStream& x0, const DigitStream& x, std::size_t max_depth) {
  std::size_t depth = 8;
  std::size_t checked = 0;
  while (true) {
    depth = std::min(depth, max_depth);
    const auto limit0 = x0.known_depth();
    const auto limit1 = x.known_depth();
    std::size_t d = depth;
    if (limit0) d = std::min(d, *limit0);
    if (limit1) d = std::min(d, *limit1);
    const PrefixBase a = x0.digits(d);
    const PrefixBase b = x.digits(d);
    for (std::size_t i = checked + 1; i <= d; ++i) {
      if (a.digit(i) != b.digit(i)) return i;
    }
    checked = d;
    if (d < depth || depth == max_depth) throw NoDisagreementUpToDepth(d);
    depth *= 2;
  }
}

ConvergenceVerdict decide_zero(Representation rep, const DigitRule& rule, const SequenceFamily& family,
                               const DecideOptions& options) {
  if (auto* e = std::get_if<ExplicitFamily>(&family)) {
    return explicit_report(rep, rule, ZeroTarget{}, *e,
                           rep == Representation::positive ? Proposition::p_zero : Proposition::pm_zero, {});
  }
  return zero_decide(rep, rule, family, options);
}

ConvergenceVerdict decide_P(const DigitRule& rule, const LimitTarget& target, const SequenceFamily& family,
                            const DecideOptions& options) {
  constexpr auto rep = Representation::positive;
  if (std::holds_alternative<ZeroTarget>(target)) return decide_zero(rep, rule, family, options);
  if (std::holds_alternative<RegularPoint>(target) || std::holds_alternative<OddSupOf>(target) ||
      std::holds_alternative<EvenInfOf>(target)) {
    throw UnclassifiedTarget("target " + describe(target) + " belongs to the P^- representation");
  }
  if (auto* e = std::get_if<ExplicitFamily>(&family)) {
    return explicit_report(rep, rule, target, *e, governing_explicit(rep, target), {});
  }
  if (auto* t = std::get_if<InfimumOf>(&target)) {
    if (t->base.empty()) throw UnclassifiedTarget("inf of the empty cylinder is 0; use the zero target");
    if (std::holds_alternative<DisagreeFamily>(family)) {
      throw InvalidFamily("right-sided infimum targets need a digit-template family");
    }
    return endpoint_decide(rep, rule, {Proposition::p_right_infimum, t->base, Side::right, cyl_inf(t->base)}, family,
                           options);
  }
  if (auto* t = std::get_if<SupremumOf>(&target)) {
    DigitStream x0(t->base, minimal_tail());
    return kn_decide(rep, rule, {Proposition::p_left_supremum, x0, cyl_sup(t->base), Side::left}, family, options);
  }
  const auto& point = std::get<InteriorPoint>(target);
  if (point.x0.has_unknown_tail()) {
    throw UnclassifiedTarget("x0 " + point.x0.describe() + " has an unknown tail");
  }
  std::optional<PointClassP> cls;
  try {
    cls = classify_point_P(point.x0, options.classify_depth);
  } catch (const Undetermined&) {
  }
  if (cls && cls->kind != PointClassP::Kind::interior) {
    PrefixBase base = cls->witness ? *cls->witness : PrefixBase(rule);
    DigitStream x0(base, minimal_tail());
    return kn_decide(rep, rule, {Proposition::p_left_supremum, x0, cyl_sup(base), Side::left}, family, options);
  }
  if (cls && cls->conclusive) {
    return kn_decide(rep, rule, {Proposition::p_interior, point.x0, std::nullopt, std::nullopt}, family, options);
  }
  return kn_decide(rep, rule, {Proposition::p_kn_sufficient, point.x0, std::nullopt, std::nullopt}, family, options);
}

ConvergenceVerdict decide_Pminus(const DigitRule& rule, const LimitTarget& target, const SequenceFamily& family,
                                 const DecideOptions& options) {
  constexpr auto rep = Representation::alternating;
  if (std::holds_alternative<ZeroTarget>(target)) return decide_zero(rep, rule, family, options);
  if (std::holds_alternative<InteriorPoint>(target) || std::holds_alternative<SupremumOf>(target) ||
      std::holds_alternative<InfimumOf>(target)) {
    throw UnclassifiedTarget("target " + describe(target) + " belongs to the P representation");
  }
  if (auto* t = std::get_if<OddSupOf>(&target)) require_rank_parity(t->base, true, "an odd-rank supremum target");
  if (auto* t = std::get_if<EvenInfOf>(&target)) require_rank_parity(t->base, false, "an even-rank infimum target");
  if (auto* e = std::get_if<ExplicitFamily>(&family)) {
    return explicit_report(rep, rule, target, *e, governing_explicit(rep, target), {});
  }
  if (auto* t = std::get_if<OddSupOf>(&target)) {
    if (std::holds_alternative<DisagreeFamily>(family)) {
      throw InvalidFamily("x0 is in IS and has no digits to disagree with; use a digit-template family");
    }
    return endpoint_decide(rep, rule, {Proposition::pm_odd_supremum, t->base, Side::left, pm_sup(t->base)}, family,
                           options);
  }
  if (auto* t = std::get_if<EvenInfOf>(&target)) {
    if (std::holds_alternative<DisagreeFamily>(family)) {
      throw InvalidFamily("x0 is in IS and has no digits to disagree with; use a digit-template family");
    }
    return endpoint_decide(rep, rule, {Proposition::pm_even_infimum, t->base, Side::right, pm_inf(t->base)}, family,
                           options);
  }
  const auto& point = std::get<RegularPoint>(target);
  if (point.x0.has_unknown_tail()) {
    throw UnclassifiedTarget("x0 " + point.x0.describe() + " has an unknown tail");
  }
  return kn_decide(rep, rule, {Proposition::pm_regular, point.x0, std::nullopt, std::nullopt}, family, options);
}

ConvergenceVerdict decide(Representation rep, const DigitRule& rule, const LimitTarget& target,
                          const SequenceFamily& family, const DecideOptions& options) {
  return rep == Representation::positive ? decide_P(rule, target, family, options)
                                         : decide_Pminus(rule, target, family, options);
}

std::optional<Rational> target_value(Representation rep, const LimitTarget& target) {
  return std::visit(overloaded{
                        [](const ZeroTarget&) -> std::optional<Rational> { return Rational(0); },
                        [&](const InteriorPoint& t) -> std::optional<Rational> {
                          if (rep != Representation::positive) return std::nullopt;
                          return eval_stream(t.x0, t.x0.prefix().rank()).exact;
                        },
                        [](const SupremumOf& t) -> std::optional<Rational> { return cyl_sup(t.base); },
                        [](const InfimumOf& t) -> std::optional<Rational> { return cyl_inf(t.base); },
                        [](const RegularPoint&) -> std::optional<Rational> { return std::nullopt; },
                        [](const OddSupOf& t) -> std::optional<Rational> { return pm_sup(t.base); },
                        [](const EvenInfOf& t) -> std::optional<Rational> { return pm_inf(t.base); },
                    },
                    target);
}

TwoSidedSplit two_sided_split(Representation rep, const DigitRule& rule, const ExplicitFamily& family,
                              const Rational& x0, std::size_t max_depth) {
  TwoSidedSplit split;
  split.representation = rep;
  split.x0 = x0;
  if (rep == Representation::positive) {
    if (sgn(x0) <= 0 || x0 > 1) throw OutOfDomain("x0 = " + to_string(x0) + " outside (0,1]");
    const DigitStream s = positive_stream_of(x0, rule, max_depth);
    if (s.has_unknown_tail()) throw Undetermined(max_depth);
    const PointClassP cls = classify_point_P(s, max_depth);
    if (cls.kind == PointClassP::Kind::interior) {
      throw SplitUnnecessary(to_string(x0) + " is not a P-cylinder endpoint; decide it directly");
    }
    const PrefixBase witness = cls.witness ? *cls.witness : PrefixBase(rule);
    split.left.target = SupremumOf{witness};
    if (auto right = supremum_as_infimum(witness)) split.right.target = InfimumOf{*right};
  } else {
    if (sgn(x0) <= 0 || x0 >= 1) throw OutOfDomain("x0 = " + to_string(x0) + " outside (0,1)");
    const ISResult is = is_member_IS(x0, rule, max_depth);
    if (is.cycle()) throw SplitUnnecessary(to_string(x0) + " is not in IS; decide it directly");
    if (!is.member()) throw Undetermined(max_depth);
    const PrefixBase& witness = is.member()->witness;
    split.left.target = OddSupOf{witness};
    if (auto right = even_infimum_base(witness)) split.right.target = EvenInfOf{*right};
  }
  for (std::size_t j = 0; j < family.values.size(); ++j) {
    const Rational& x = family.values[j];
    check_element_domain(rep, x);
    if (x == x0) throw ElementEqualsTarget("element " + std::to_string(j + 1) + " equals x0 = " + to_string(x0));
    SplitSide& side = x < x0 ? split.left : split.right;
    side.indices.push_back(j + 1);
    side.values.push_back(x);
  }
  if (!split.right.values.empty() && !split.right.target) {
    throw OutOfDomain("elements above x0 = 1 are outside the domain");
  }
  return split;
}

SplitReport decide_two_sided(Representation rep, const DigitRule& rule, const ExplicitFamily& family,
                             const Rational& x0, const DecideOptions& options) {
  (void)options;
  SplitReport report{two_sided_split(rep, rule, family, x0), std::nullopt, std::nullopt};
  auto side_report = [&](const SplitSide& side) -> std::optional<ConvergenceVerdict> {
    if (side.values.empty() || !side.target) return std::nullopt;
    return explicit_report(rep, rule, *side.target, ExplicitFamily{side.values},
                           governing_explicit(rep, *side.target), side.indices);
  };
  report.left = side_report(report.split.left);
  report.right = side_report(report.split.right);
  return report;
}

std::vector<Rational> oracle_distance_profile(Representation rep, const DigitRule& rule,
                                              const SequenceFamily& family, const LimitTarget& target,
                                              const std::vector<std::uint64_t>& sample_indices) {
  const auto x0 = target_value(rep, target);
  if (!x0) throw NotExactlyEvaluable("the target " + describe(target) + " has no exact value");
  std::optional<DigitStream> x0_stream;
  if (auto* t = std::get_if<InteriorPoint>(&target)) x0_stream = t->x0;
  if (auto* t = std::get_if<SupremumOf>(&target)) x0_stream = DigitStream(t->base, minimal_tail());

  std::vector<Rational> out;
  for (auto n : sample_indices) {
    Rational x;
    if (auto* e = std::get_if<ExplicitFamily>(&family)) {
      if (n < 1 || n > e->values.size()) throw InvalidFamily("index " + std::to_string(n) + " outside the list");
      x = e->values[n - 1];
    } else {
      if (rep != Representation::positive) {
        throw NotExactlyEvaluable("P^- digit streams have no exact value in general");
      }
      const DigitStream s = family_element(family, rule, n, x0_stream);
      const Enclosure enc = eval_stream(s, s.prefix().rank());
      if (!enc.exact) throw NotExactlyEvaluable("element " + std::to_string(n) + " has a non-minimal tail");
      x = *enc.exact;
    }
    Rational d = x - *x0;
    out.push_back(abs(d));
  }
  return out;
}

}  // namespace perron
