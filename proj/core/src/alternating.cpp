#include "perron/alternating.hpp"

#include "perron/errors.hpp"

#include <map>
#include <utility>

namespace perron {

namespace {

void require_open_unit(const Rational& x) {
  if (sgn(x) <= 0 || x >= 1) throw OutOfDomain("P^- representation needs 0 < x < 1, got " + to_string(x));
}

bool minimal_last(const PrefixBase& base) {
  const std::size_t k = base.rank();
  return base.digit(k) == base.r(k - 1) + 1;
}

std::string bracket(const PrefixBase& base) { return "[" + format_digits(base.digits(), ",") + "]"; }

// Witness of odd rank whose supremum is the endpoint reached by the orbit:
// after j digits the remainder equals r_j/m, which is the supremum of the
// shifted cylinder (m+1) and the infimum of the shifted cylinder (m).
// The map from remainder to x is increasing for even j and decreasing for odd j.
PrefixBase member_witness(const PrefixBase& digits, const Integer& m) {
  if (digits.rank() % 2 == 0) return digits.extended(m + 1);
  PrefixBase even = digits.extended(m);
  return even.extended(even.min_next_digit());
}

}  // namespace

std::string_view to_string(Parity parity) { return parity == Parity::odd ? "odd" : "even"; }

PMinusCylinder pm_cylinder(const PrefixBase& base) {
  CylinderGeometry g;
  g.kind = Representation::alternating;
  g.rank = base.rank();
  Rational partial = 0;
  for (std::size_t n = 0; n < base.rank(); ++n) {
    Rational term = base.weight(n) * base.r(n) / Rational(base.digit(n + 1) - 1);
    if (n % 2) {
      partial -= term;
    } else {
      partial += term;
    }
  }
  g.diam = base.weight(base.rank());
  const Parity parity = parity_of(base.rank());
  if (base.empty()) {
    g.inf = 0;
    g.sup = 1;
  } else if (parity == Parity::odd) {
    g.sup = partial;
    g.inf = partial - g.diam;
  } else {
    g.inf = partial;
    g.sup = partial + g.diam;
  }
  return PMinusCylinder{base, std::move(g), parity};
}

Rational pm_inf(const PrefixBase& base) { return pm_cylinder(base).geometry.inf; }
Rational pm_sup(const PrefixBase& base) { return pm_cylinder(base).geometry.sup; }

AlternatingStep alternating_step(const Rational& y, const Integer& r) {
  Integer digit = floor_of(Rational(r) / y) + 1;
  const Rational top = make_rational(r, digit - 1);
  Rational remainder = (top - y) * Rational(digit * (digit - 1)) / Rational(r);
  return {std::move(digit), std::move(remainder)};
}

Orbit alternating_orbit(const Rational& x, const DigitRule& rule, std::size_t max_depth, std::size_t max_digit_bits) {
  require_open_unit(x);
  Orbit orbit{PrefixBase(rule), {x}, Orbit::End::depth_limit, 0, 0};
  std::map<std::pair<Rational, Integer>, std::size_t> seen;
  for (std::size_t j = 0;; ++j) {
    const Rational& y = orbit.remainders.back();
    const Integer& r = orbit.digits.r(j);
    if (is_integer(Rational(r) / y)) {
      orbit.end = Orbit::End::endpoint;
      return orbit;
    }
    if (j >= rule.memoryless_from()) {
      auto [it, inserted] = seen.emplace(std::make_pair(y, r), j);
      if (!inserted) {
        orbit.end = Orbit::End::cycle;
        orbit.cycle_start = it->second;
        orbit.cycle_length = j - it->second;
        return orbit;
      }
    }
    if (j == max_depth) return orbit;
    AlternatingStep step = alternating_step(y, r);
    orbit.digits.append(std::move(step.digit));
    orbit.remainders.push_back(std::move(step.remainder));
    if (exceeds_bit_budget(orbit.digits.last_digit(), max_digit_bits)) {
      orbit.end = Orbit::End::size_limit;
      return orbit;
    }
  }
}

std::variant<PrefixBase, ISMember> pm_digits_of(const Rational& x, const DigitRule& rule, std::size_t n) {
  require_open_unit(x);
  PrefixBase digits(rule);
  Rational y = x;
  for (std::size_t j = 0; j < n; ++j) {
    const Integer& r = digits.r(j);
    const Rational ratio = Rational(r) / y;
    if (is_integer(ratio)) {
      ISMember member{member_witness(digits, ratio.get_num()), j};
      if (pm_sup(member.witness) != x) throw std::logic_error("IS witness does not reproduce x");
      return member;
    }
    AlternatingStep step = alternating_step(y, r);
    digits.append(std::move(step.digit));
    y = std::move(step.remainder);
  }
  const CylinderGeometry g = pm_cylinder(digits).geometry;
  if (!(g.inf < x && x < g.sup)) throw std::logic_error("P^- digits do not enclose x");
  return digits;
}

ISResult is_member_IS(const Rational& x, const DigitRule& rule, std::size_t max_depth, std::size_t max_digit_bits) {
  Orbit orbit = alternating_orbit(x, rule, max_depth, max_digit_bits);
  switch (orbit.end) {
    case Orbit::End::endpoint: {
      const Rational ratio = Rational(orbit.digits.r(orbit.digits.rank())) / orbit.remainders.back();
      const Integer m = ratio.get_num();
      ISMember member{member_witness(orbit.digits, m), orbit.digits.rank()};
      if (pm_sup(member.witness) != x) throw std::logic_error("IS witness does not reproduce x");
      return ISResult{std::move(member), std::move(orbit.digits)};
    }
    case Orbit::End::cycle: {
      ISNotMember cycle{orbit.cycle_start, orbit.cycle_length, {}};
      cycle.cycle_remainders.assign(orbit.remainders.begin() + static_cast<std::ptrdiff_t>(orbit.cycle_start),
                                    orbit.remainders.end() - 1);
      return ISResult{std::move(cycle), std::move(orbit.digits)};
    }
    case Orbit::End::depth_limit:
      break;
    case Orbit::End::size_limit: {
      const std::size_t depth = orbit.digits.rank();
      return ISResult{ISNotMemberUpToDepth{depth, true}, std::move(orbit.digits)};
    }
  }
  return ISResult{ISNotMemberUpToDepth{max_depth}, std::move(orbit.digits)};
}

DigitStream alternating_stream_of(const Rational& x, const DigitRule& rule, std::size_t max_depth) {
  Orbit orbit = alternating_orbit(x, rule, max_depth);
  switch (orbit.end) {
    case Orbit::End::endpoint:
      throw OutOfDomain(to_string(x) + " is a P^- cylinder endpoint and has no P^- representation");
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

Enclosure pm_eval_stream(const DigitStream& x, std::size_t depth) {
  const CylinderGeometry g = pm_cylinder(x.digits(depth)).geometry;
  return Enclosure{g.inf, g.sup, false, false, std::nullopt};
}

std::optional<PrefixBase> even_infimum_base(const PrefixBase& witness) {
  const std::size_t k = witness.rank();
  if (k % 2 == 0) throw OutOfDomain("even_infimum_base expects an odd-rank base");
  if (minimal_last(witness)) {
    // sup Delta_{c1..ck} = sup Delta_{c1..c(k-1)} = inf Delta_{c1..c(k-2)[c(k-1)+1]}
    if (k == 1) return std::nullopt;
    const PrefixBase parent = witness.truncated(k - 1);
    return parent.with_last_digit(parent.last_digit() + 1);
  }
  // sup Delta_{c1..ck} = inf Delta_{c1..c(k-1)[ck-1][r_k+1]}
  const PrefixBase lowered = witness.with_last_digit(witness.last_digit() - 1);
  return lowered.extended(lowered.min_next_digit());
}

std::vector<IdentityCheck> odd_identities(const PrefixBase& base) {
  const std::size_t k = base.rank();
  if (k % 2 == 0) throw OutOfDomain("odd_identities expects an odd-rank base");
  const PMinusCylinder self = pm_cylinder(base);
  std::vector<IdentityCheck> out;

  const PrefixBase neighbor = base.with_last_digit(base.last_digit() + 1);
  out.push_back({"inf-left-neighbor", "inf " + bracket(base) + " = sup " + bracket(neighbor),
                 self.geometry.inf == pm_sup(neighbor)});

  const PrefixBase first_child = base.extended(base.min_next_digit());
  out.push_back({"inf-first-child", "inf " + bracket(base) + " = inf " + bracket(first_child),
                 self.geometry.inf == pm_inf(first_child)});

  if (minimal_last(base)) {
    if (k >= 3) {
      const PrefixBase parent = base.truncated(k - 1);
      const PrefixBase uncle = parent.with_last_digit(parent.last_digit() + 1);
      out.push_back({"sup-minimal-digit",
                     "sup " + bracket(base) + " = sup " + bracket(parent) + " = inf " + bracket(uncle),
                     self.geometry.sup == pm_sup(parent) && pm_sup(parent) == pm_inf(uncle)});
    }
  } else {
    const PrefixBase lowered = base.with_last_digit(base.last_digit() - 1);
    const PrefixBase lowered_child = lowered.extended(lowered.min_next_digit());
    out.push_back({"sup-non-minimal-digit",
                   "sup " + bracket(base) + " = inf " + bracket(lowered) + " = inf " + bracket(lowered_child),
                   self.geometry.sup == pm_inf(lowered) && pm_inf(lowered) == pm_inf(lowered_child)});
  }
  return out;
}

std::vector<IdentityCheck> even_identities(const PrefixBase& base) {
  const std::size_t k = base.rank();
  if (k == 0 || k % 2 == 1) throw OutOfDomain("even_identities expects an even rank >= 2");
  const PMinusCylinder self = pm_cylinder(base);
  std::vector<IdentityCheck> out;

  const PrefixBase neighbor = base.with_last_digit(base.last_digit() + 1);
  out.push_back({"sup-right-neighbor", "sup " + bracket(base) + " = inf " + bracket(neighbor),
                 self.geometry.sup == pm_inf(neighbor)});

  const PrefixBase first_child = base.extended(base.min_next_digit());
  out.push_back({"sup-first-child", "sup " + bracket(base) + " = sup " + bracket(first_child),
                 self.geometry.sup == pm_sup(first_child)});

  if (minimal_last(base)) {
    const PrefixBase parent = base.truncated(k - 1);
    const PrefixBase uncle = parent.with_last_digit(parent.last_digit() + 1);
    out.push_back({"inf-minimal-digit",
                   "inf " + bracket(base) + " = inf " + bracket(parent) + " = sup " + bracket(uncle),
                   self.geometry.inf == pm_inf(parent) && pm_inf(parent) == pm_sup(uncle)});
  } else {
    const PrefixBase lowered = base.with_last_digit(base.last_digit() - 1);
    const PrefixBase lowered_child = lowered.extended(lowered.min_next_digit());
    out.push_back({"inf-non-minimal-digit",
                   "inf " + bracket(base) + " = sup " + bracket(lowered) + " = sup " + bracket(lowered_child),
                   self.geometry.inf == pm_sup(lowered) && pm_sup(lowered) == pm_sup(lowered_child)});
  }
  return out;
}

}  // namespace perron
