#include "perron/positive.hpp"

#include "perron/errors.hpp"

#include <map>
#include <utility>

namespace perron {

namespace {

bool is_minimal_at(const PrefixBase& digits, std::size_t position) {
  return digits.digit(position) == digits.r(position - 1) + 1;
}

// First position m such that digits m..rank are all minimal (rank+1 if none).
std::size_t minimal_run_start(const PrefixBase& digits, std::size_t rank) {
  std::size_t m = rank + 1;
  while (m > 1 && is_minimal_at(digits, m - 1)) --m;
  return m;
}

PointClassP supremum_class(const PrefixBase& digits, std::size_t minimal_from, std::size_t depth) {
  PointClassP out;
  out.depth = depth;
  const std::size_t start = minimal_run_start(digits, minimal_from - 1);
  if (start == 1) {
    out.kind = PointClassP::Kind::one;
  } else {
    out.kind = PointClassP::Kind::cylinder_supremum;
    out.witness = digits.truncated(start - 1);
  }
  return out;
}

}  // namespace

CylinderGeometry p_cylinder(const PrefixBase& base) {
  CylinderGeometry g;
  g.kind = Representation::positive;
  g.rank = base.rank();
  Rational inf = 0;
  for (std::size_t n = 0; n < base.rank(); ++n) {
    inf += base.weight(n) * base.r(n) / Rational(base.digit(n + 1));
  }
  g.diam = base.weight(base.rank());
  g.sup = inf + g.diam;
  g.inf = std::move(inf);
  return g;
}

Rational cyl_inf(const PrefixBase& base) { return p_cylinder(base).inf; }
Rational cyl_sup(const PrefixBase& base) { return p_cylinder(base).sup; }
Rational cyl_diam(const PrefixBase& base) { return base.weight(base.rank()); }

Enclosure eval_stream(const DigitStream& x, std::size_t depth) {
  const PrefixBase digits = x.digits(depth);
  const CylinderGeometry g = p_cylinder(digits);
  Enclosure e{g.inf, g.sup, false, true, std::nullopt};
  bool minimal_after_prefix = x.has_minimal_tail();
  if (const auto* gen = std::get_if<GeneratorTail>(&x.tail())) {
    minimal_after_prefix = gen->shape() == GeneratorTail::Shape::eventually_minimal;
  }
  if (minimal_after_prefix) e.exact = cyl_sup(x.prefix());
  return e;
}

bool first_digit_bound_check(const Rational& x, const Integer& p1, const Integer& r0) {
  if (p1 < 2) return false;
  const Rational lower(r0, p1);
  const Rational upper = make_rational(r0, p1 - 1);
  return lower < x && x <= upper;
}

ExtractionStep positive_step(const Rational& y, const Integer& r) {
  const Rational ratio = Rational(r) / y;
  Integer digit = floor_of(ratio) + 1;
  Rational remainder = (y - Rational(r) / Rational(digit)) * Rational(digit * (digit - 1)) / Rational(r);
  return {std::move(digit), std::move(remainder)};
}

PrefixBase digits_of(const Rational& x, const DigitRule& rule, std::size_t n) {
  if (sgn(x) <= 0 || x > 1) throw OutOfDomain("P-representation needs 0 < x <= 1, got " + to_string(x));
  PrefixBase out(rule);
  Rational y = x;
  for (std::size_t i = 0; i < n; ++i) {
    ExtractionStep step = positive_step(y, out.r(i));
    out.append(std::move(step.digit));
    y = std::move(step.remainder);
  }
  return out;
}

Orbit positive_orbit(const Rational& x, const DigitRule& rule, std::size_t max_depth, std::size_t max_digit_bits) {
  if (sgn(x) <= 0 || x > 1) throw OutOfDomain("P-representation needs 0 < x <= 1, got " + to_string(x));
  Orbit orbit{PrefixBase(rule), {x}, Orbit::End::depth_limit, 0, 0};
  std::map<std::pair<Rational, Integer>, std::size_t> seen;
  for (std::size_t j = 0;; ++j) {
    const Rational& y = orbit.remainders.back();
    if (y == 1) {
      orbit.end = Orbit::End::endpoint;
      return orbit;
    }
    if (j >= rule.memoryless_from()) {
      auto [it, inserted] = seen.emplace(std::make_pair(y, orbit.digits.r(j)), j);
      if (!inserted) {
        orbit.end = Orbit::End::cycle;
        orbit.cycle_start = it->second;
        orbit.cycle_length = j - it->second;
        return orbit;
      }
    }
    if (j == max_depth) return orbit;
    ExtractionStep step = positive_step(y, orbit.digits.r(j));
    orbit.digits.append(std::move(step.digit));
    orbit.remainders.push_back(std::move(step.remainder));
    if (exceeds_bit_budget(orbit.digits.last_digit(), max_digit_bits)) {
      orbit.end = Orbit::End::size_limit;
      return orbit;
    }
  }
}

DigitStream positive_stream_of(const Rational& x, const DigitRule& rule, std::size_t max_depth) {
  Orbit orbit = positive_orbit(x, rule, max_depth);
  switch (orbit.end) {
    case Orbit::End::endpoint:
      return DigitStream(std::move(orbit.digits), minimal_tail());
    case Orbit::End::cycle: {
      const auto& d = orbit.digits.digits();
      std::vector<Integer> cycle(d.begin() + static_cast<std::ptrdiff_t>(orbit.cycle_start), d.end());
      const std::size_t next = orbit.digits.rank() + 1;
      return DigitStream(std::move(orbit.digits), periodic_tail(std::move(cycle), next));
    }
    case Orbit::End::depth_limit:
    case Orbit::End::size_limit:
      break;
  }
  return DigitStream(std::move(orbit.digits), unknown_tail());
}

PointClassP classify_point_P(const DigitStream& x, std::size_t depth) {
  const PrefixBase& prefix = x.prefix();
  if (x.has_minimal_tail()) {
    const PrefixBase digits = x.digits(std::max(depth, prefix.rank()));
    return supremum_class(digits, prefix.rank() + 1, depth);
  }

  if (const auto* gen = std::get_if<GeneratorTail>(&x.tail())) {
    using Shape = GeneratorTail::Shape;
    switch (gen->shape()) {
      case Shape::eventually_minimal: {
        const PrefixBase digits = x.digits(std::max(depth, prefix.rank()));
        return supremum_class(digits, prefix.rank() + 1, depth);
      }
      case Shape::infinitely_often_non_minimal:
        return PointClassP{PointClassP::Kind::interior, std::nullopt, depth, true};
      case Shape::periodic: {
        // Minimality of position j depends on (c_{j-1}, c_j) once the rule is
        // memoryless, so one period past the anchor decides the whole tail.
        const std::size_t anchor = std::max(prefix.rank() + 2, x.rule().memoryless_from() + 2);
        const std::size_t end = anchor + gen->period() - 1;
        const PrefixBase digits = x.digits(std::max(end, depth));
        bool all_minimal = true;
        for (std::size_t j = anchor; j <= end; ++j) all_minimal = all_minimal && is_minimal_at(digits, j);
        if (!all_minimal) return PointClassP{PointClassP::Kind::interior, std::nullopt, depth, true};
        return supremum_class(digits, anchor, depth);
      }
      case Shape::opaque:
        break;
    }
  }

  // Unknown or opaque tail: only the inspected window is available.
  const std::size_t inspect = x.has_unknown_tail() ? std::min(depth, prefix.rank()) : depth;
  if (inspect == 0) throw Undetermined(0);
  const PrefixBase digits = x.digits(inspect);
  if (is_minimal_at(digits, inspect)) throw Undetermined(inspect);
  return PointClassP{PointClassP::Kind::interior, std::nullopt, inspect, false};
}

bool left_neighbor_sup_identity(const PrefixBase& base) {
  if (base.empty()) throw OutOfDomain("neighbor identity needs a rank >= 1 base");
  const PrefixBase neighbor = base.with_last_digit(base.last_digit() + 1);
  return cyl_inf(base) == cyl_sup(neighbor);
}

std::optional<PrefixBase> supremum_as_infimum(const PrefixBase& base) {
  // sup of a cylinder equals the sup of its parent when the last digit is
  // minimal; otherwise it is the inf of the right neighbor (digit - 1).
  for (std::size_t j = base.rank(); j >= 1; --j) {
    if (!is_minimal_at(base, j)) {
      return base.truncated(j).with_last_digit(base.digit(j) - 1);
    }
  }
  return std::nullopt;
}

}  // namespace perron
