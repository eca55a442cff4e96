// Acceptance suite: one PASS/FAIL line per criterion. Reference values come
// from tests/oracles; the library is only used for the quantity under test.
//
// Usage: acceptance [test-binary ...]
// The listed binaries are run for the suite-time criterion.

#include <perron/alternating.hpp>
#include <perron/convergence.hpp>
#include <perron/errors.hpp>
#include <perron/positive.hpp>

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"

using namespace perron;
using Clock = std::chrono::steady_clock;

namespace {

const std::vector<std::string> kSystems = {"luroth", "engel", "sylvester", "pierce", "alt-luroth"};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt_seconds(double s) {
  std::ostringstream out;
  out.precision(2);
  out << std::fixed << s << "s";
  return out.str();
}

struct Outcome {
  bool ok = true;
  std::string detail;
  std::string failure;

  void fail(const std::string& why) {
    if (ok) failure = why;
    ok = false;
  }
  void check(bool cond, const std::string& why) {
    if (!cond) fail(why);
  }
};

int failures = 0;

void report(int id, const std::string& title, const Outcome& o) {
  std::cout << (o.ok ? "PASS" : "FAIL") << " [" << id << "] " << title << ": " << o.detail;
  if (!o.ok) std::cout << " -- " << o.failure;
  std::cout << std::endl;
  if (!o.ok) ++failures;
}

template <class F>
void run_criterion(int id, const std::string& title, F&& body) {
  Outcome o;
  try {
    body(o);
  } catch (const std::exception& e) {
    o.fail(std::string("exception: ") + e.what());
  }
  report(id, title, o);
}

std::string digits_text(const std::vector<Integer>& d) { return "(" + format_digits(d, ",") + ")"; }

// Oracle enclosure of a value as a closed interval [lo, hi].
struct Span {
  oracle::Q lo;
  oracle::Q hi;
};

oracle::Q distance_upper(const Span& a, const Span& b) { return std::max(a.hi - b.lo, b.hi - a.lo); }

oracle::Q distance_lower(const Span& a, const Span& b) {
  oracle::Q d = std::max(a.lo - b.hi, b.lo - a.hi);
  return d > 0 ? d : oracle::Q(0);
}

// Digits extended by `extra` minimal digits, each chosen from the oracle r-function.
std::vector<oracle::Z> with_minimal_digits(std::vector<oracle::Z> c, const oracle::RFn& r, std::size_t extra) {
  for (std::size_t i = 0; i < extra; ++i) c.push_back(r(c) + 1);
  return c;
}

// ------------------------------------------------------------ criterion 1

void cylinder_geometry(Outcome& o) {
  const auto t0 = Clock::now();
  oracle::Gen g(1001);
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::string& name = kSystems[g.uniform(0, kSystems.size() - 1)];
    const auto r = oracle::r_for(name);
    const auto c = oracle::random_base(g, r, g.uniform(0, 8));
    const PrefixBase base = validate_prefix(c, builtin(name));
    const CylinderGeometry p = p_cylinder(base);
    const PMinusCylinder m = pm_cylinder(base);
    const auto op = oracle::p_cylinder(c, r);
    const auto om = oracle::pm_cylinder(c, r);
    const std::string where = name + " " + digits_text(c);
    o.check(p.sup - p.inf == p.diam, "P sup - inf != diam at " + where);
    o.check(m.geometry.sup - m.geometry.inf == m.geometry.diam, "P- sup - inf != diam at " + where);
    o.check(p.inf == op.inf && p.sup == op.sup && p.diam == op.diam, "P endpoints differ from series at " + where);
    o.check(m.geometry.inf == om.inf && m.geometry.sup == om.sup, "P- endpoints differ from series at " + where);
    ++checked;
  }
  const double s = seconds_since(t0);
  o.check(s < 5.0, "took " + fmt_seconds(s));
  o.detail = std::to_string(checked) + " (system, base) pairs in " + fmt_seconds(s);
}

// ------------------------------------------------------------ criterion 2

void rank_one_endpoints(Outcome& o) {
  int checked = 0;
  for (long phi0 : {1L, 2L, 3L}) {
    const DigitRule rule(SystemDescriptor{"phi0-" + std::to_string(phi0), Integer(phi0), {RuleTemplate::constant, 1}, {}});
    const auto r = oracle::r_constant_phi0(phi0);
    for (long c = phi0 + 1; c <= phi0 + 50; ++c) {
      const PrefixBase base = validate_prefix({c}, rule);
      const oracle::Q inf = oracle::q(phi0, c);
      const oracle::Q sup = oracle::q(phi0, c - 1);
      const auto series = oracle::p_cylinder({oracle::Z(c)}, r);
      const std::string where = "phi0=" + std::to_string(phi0) + " c1=" + std::to_string(c);
      o.check(series.inf == inf && series.sup == sup, "series disagrees with r0/c1 at " + where);
      o.check(cyl_inf(base) == inf && cyl_sup(base) == sup, "P endpoints at " + where);
      o.check(pm_inf(base) == inf && pm_sup(base) == sup, "P- endpoints at " + where);
      // Half-open on the P side: the supremum keeps digit c, the infimum does not.
      if (sup < 1) {
        o.check(digits_of(sup, rule, 1).digit(1) == c, "P supremum excluded at " + where);
      }
      o.check(digits_of(inf, rule, 1).digit(1) == c + 1, "P infimum included at " + where);
      // Open on the P- side: both endpoints are IS members, so no stream has first digit c there.
      for (const oracle::Q& e : {inf, sup}) {
        if (e >= 1) continue;
        const auto d = pm_digits_of(e, rule, 1);
        o.check(std::holds_alternative<ISMember>(d), "P- endpoint " + e.get_str() + " has digits at " + where);
      }
      ++checked;
    }
  }
  o.detail = std::to_string(checked) + " first digits for phi0 in {1,2,3}; (r0/(r0+1), 1] and (r0/(r0+2), r0/(r0+1)] included";
}

// ------------------------------------------------------------ criterion 3

void classical_expansions(Outcome& o) {
  oracle::Gen g(3003);
  constexpr std::size_t depth = 15;
  std::map<std::string, int> counts;
  using Greedy = std::function<std::vector<oracle::Z>(oracle::Q, std::size_t)>;
  const std::vector<std::pair<std::string, Greedy>> positive = {
      {"luroth", oracle::luroth}, {"engel", oracle::engel}, {"sylvester", oracle::sylvester}};
  for (const auto& [name, greedy] : positive) {
    const DigitRule rule = builtin(name);
    for (int i = 0; i < 500; ++i) {
      const auto x = g.rational_open(1000000);
      const auto expected = greedy(x, depth);
      const PrefixBase got = digits_of(x, rule, depth);
      o.check(got.digits() == expected, name + " digits of " + x.get_str());
      ++counts[name];
    }
  }
  const DigitRule pierce = builtin("pierce");
  int terminated = 0;
  for (int i = 0; i < 500; ++i) {
    const auto x = g.rational_open(1000000);
    const auto expected = oracle::pierce(x, depth);
    const auto got = pm_digits_of(x, pierce, depth);
    const std::string where = "pierce digits of " + x.get_str();
    if (expected.terminated) {
      ++terminated;
      const ISMember* m = std::get_if<ISMember>(&got);
      o.check(m != nullptr, where + ": Pierce expansion terminates but no IS witness");
      if (!m) continue;
      o.check(m->step == expected.a.size(), where + ": termination step differs from IS step");
      for (std::size_t j = 0; j < expected.a.size(); ++j) {
        o.check(m->witness.digit(j + 1) == expected.a[j] + 1, where + ": witness digit " + std::to_string(j + 1));
      }
    } else {
      const PrefixBase* d = std::get_if<PrefixBase>(&got);
      o.check(d != nullptr, where + ": IS member but the Pierce expansion continues");
      if (!d) continue;
      for (std::size_t j = 0; j < depth; ++j) {
        o.check(d->digit(j + 1) == expected.a[j] + 1, where + ": digit " + std::to_string(j + 1));
      }
    }
    ++counts["pierce"];
  }
  o.detail = "500 rationals each for luroth, engel, sylvester (P) and pierce (P-) at depth 15; " +
             std::to_string(terminated) + " Pierce terminations matched IS steps";
}

// ------------------------------------------------------------ criterion 4

void diameter_decay(Outcome& o) {
  oracle::Gen g(4004);
  int pairs = 0;
  for (int i = 0; i < 10000; ++i) {
    const std::string& name = kSystems[g.uniform(0, kSystems.size() - 1)];
    const auto r = oracle::r_for(name);
    auto c = oracle::random_base(g, r, g.uniform(0, 7));
    const PrefixBase parent = validate_prefix(c, builtin(name));
    c.push_back(r(c) + 1 + static_cast<unsigned long>(g.offset()));
    const PrefixBase child = parent.extended(c.back());
    const std::string where = name + " " + digits_text(c);
    const CylinderGeometry pp = p_cylinder(parent), pc = p_cylinder(child);
    const PMinusCylinder mp = pm_cylinder(parent), mc = pm_cylinder(child);
    const auto oc = oracle::p_cylinder(c, r);
    o.check(2 * pc.diam <= pp.diam, "P decay at " + where);
    o.check(2 * mc.geometry.diam <= mp.geometry.diam, "P- decay at " + where);
    o.check(pc.diam == oc.diam, "diameter differs from series at " + where);
    o.check(pp.inf <= pc.inf && pc.sup <= pp.sup, "P nesting at " + where);
    o.check(mp.geometry.inf <= mc.geometry.inf && mc.geometry.sup <= mp.geometry.sup, "P- nesting at " + where);
    ++pairs;
  }
  o.detail = std::to_string(pairs) + " parent/child pairs, both representations";
}

// ------------------------------------------------------------ criterion 5

// Random base of the given rank whose last digit is minimal or not, as asked.
std::vector<oracle::Z> base_with_last(oracle::Gen& g, const oracle::RFn& r, std::size_t rank, bool minimal_last) {
  auto c = oracle::random_base(g, r, rank - 1);
  const oracle::Z min = r(c) + 1;
  c.push_back(minimal_last ? min : min + 1 + static_cast<unsigned long>(g.offset()));
  return c;
}

std::vector<oracle::Z> with_last(std::vector<oracle::Z> c, const oracle::Z& d) {
  c.back() = d;
  return c;
}

std::vector<oracle::Z> first_child(std::vector<oracle::Z> c, const oracle::RFn& r) {
  c.push_back(r(c) + 1);
  return c;
}

std::vector<oracle::Z> truncated(const std::vector<oracle::Z>& c, std::size_t n) { return {c.begin(), c.begin() + n}; }

// The alternating identities written from the series alone.
std::map<std::string, bool> oracle_identities(const std::vector<oracle::Z>& c, const oracle::RFn& r) {
  const auto pm = [&](const std::vector<oracle::Z>& d) { return oracle::pm_cylinder(d, r); };
  const std::size_t k = c.size();
  const bool minimal = c.back() == r(truncated(c, k - 1)) + 1;
  const auto self = pm(c);
  std::map<std::string, bool> out;
  if (k % 2 == 1) {
    out["inf-left-neighbor"] = self.inf == pm(with_last(c, c.back() + 1)).sup;
    out["inf-first-child"] = self.inf == pm(first_child(c, r)).inf;
    if (minimal && k >= 3) {
      const auto parent = truncated(c, k - 1);
      out["sup-minimal-digit"] =
          self.sup == pm(parent).sup && pm(parent).sup == pm(with_last(parent, parent.back() + 1)).inf;
    } else if (!minimal) {
      const auto lowered = with_last(c, c.back() - 1);
      out["sup-non-minimal-digit"] = self.sup == pm(lowered).inf && pm(lowered).inf == pm(first_child(lowered, r)).inf;
    }
  } else {
    out["sup-right-neighbor"] = self.sup == pm(with_last(c, c.back() + 1)).inf;
    out["sup-first-child"] = self.sup == pm(first_child(c, r)).sup;
    if (minimal) {
      const auto parent = truncated(c, k - 1);
      out["inf-minimal-digit"] =
          self.inf == pm(parent).inf && pm(parent).inf == pm(with_last(parent, parent.back() + 1)).sup;
    } else {
      const auto lowered = with_last(c, c.back() - 1);
      out["inf-non-minimal-digit"] = self.inf == pm(lowered).sup && pm(lowered).sup == pm(first_child(lowered, r)).sup;
    }
  }
  return out;
}

void identities(Outcome& o) {
  oracle::Gen g(5005);
  std::map<std::string, int> hits;

  // P: left neighbor and supremum-as-infimum.
  for (int i = 0; i < 500; ++i) {
    const std::string& name = kSystems[g.uniform(0, kSystems.size() - 1)];
    const auto r = oracle::r_for(name);
    const auto c = base_with_last(g, r, g.uniform(1, 8), g.coin());
    const PrefixBase base = validate_prefix(c, builtin(name));
    const std::string where = name + " " + digits_text(c);
    const auto self = oracle::p_cylinder(c, r);
    o.check(left_neighbor_sup_identity(base), "P neighbor identity at " + where);
    o.check(self.inf == oracle::p_cylinder(with_last(c, c.back() + 1), r).sup, "P neighbor identity (series) at " + where);
    ++hits["P-left-neighbor"];
    const auto as_inf = supremum_as_infimum(base);
    if (self.sup == 1) {
      o.check(!as_inf, "P supremum 1 has no infimum base at " + where);
    } else {
      o.check(as_inf.has_value(), "P supremum_as_infimum missing at " + where);
      if (as_inf) {
        o.check(oracle::p_cylinder(as_inf->digits(), r).inf == self.sup, "P sup-as-inf (series) at " + where);
        ++hits["P-sup-as-inf"];
      }
    }
  }

  // P-: 500 odd and 500 even bases, half with a minimal last digit.
  for (const bool odd : {true, false}) {
    for (int i = 0; i < 500; ++i) {
      const std::string& name = kSystems[g.uniform(0, kSystems.size() - 1)];
      const auto r = oracle::r_for(name);
      const bool minimal = i % 2 == 0;
      std::size_t rank = 2 * g.uniform(0, 3) + (odd ? 1 : 2);
      if (odd && minimal && rank < 3) rank = 3;
      const auto c = base_with_last(g, r, rank, minimal);
      const PrefixBase base = validate_prefix(c, builtin(name));
      const std::string where = name + " " + digits_text(c);
      const auto expected = oracle_identities(c, r);
      const auto got = odd ? odd_identities(base) : even_identities(base);
      o.check(got.size() == expected.size(), "identity set size at " + where);
      for (const auto& id : got) {
        const auto it = expected.find(id.name);
        o.check(it != expected.end(), "unexpected identity " + id.name + " at " + where);
        o.check(id.holds, id.name + " fails at " + where);
        if (it != expected.end()) o.check(it->second, id.name + " fails in the series at " + where);
        ++hits[id.name];
      }
    }
  }

  std::ostringstream detail;
  detail << "branches:";
  for (const auto& [name, n] : hits) {
    detail << " " << name << "=" << n;
    o.check(n >= 100, name + " exercised only " + std::to_string(n) + " times");
  }
  for (const char* name : {"inf-left-neighbor", "inf-first-child", "sup-minimal-digit", "sup-non-minimal-digit",
                           "sup-right-neighbor", "sup-first-child", "inf-minimal-digit", "inf-non-minimal-digit"}) {
    o.check(hits.count(name) == 1, std::string(name) + " never exercised");
  }
  o.detail = detail.str();
}

// ------------------------------------------------------------ criterion 6

struct ConvergenceCase {
  std::string label;
  Representation rep;
  std::string system;
  LimitTarget target;
  SequenceFamily family;
  Proposition proposition;
  Verdict expected;
};

DigitStream stream(std::initializer_list<long> digits, const std::string& system, Tail tail) {
  return DigitStream(validate_prefix(digits, builtin(system)), std::move(tail));
}

PrefixBase base(std::initializer_list<long> digits, const std::string& system) {
  return validate_prefix(digits, builtin(system));
}

Tail opaque_tail() {
  return GeneratorTail(
      [](std::size_t p, const PrefixBase& so_far) -> std::optional<Integer> {
        return so_far.min_next_digit() + static_cast<unsigned long>((p * p) % 3);
      },
      "min + p^2 mod 3");
}

IntMap aff(long a, long b) { return IntMap::affine(Integer(a), Integer(b)); }
IntMap cst(long c) { return IntMap::constant(Integer(c)); }
IntMap bounded_on_odd(IntMap grow, long c) { return IntMap::interleave({std::move(grow), cst(c)}); }

std::vector<ConvergenceCase> convergence_cases() {
  using P = Proposition;
  const auto pos = Representation::positive;
  const auto alt = Representation::alternating;
  const auto C = Verdict::converges;
  const auto D = Verdict::diverges;
  const auto periodic_25 = positive_stream_of(oracle::q(2, 5), builtin("luroth"));
  const auto engel_interior = stream({3}, "engel", offset_tail(cst(1)));
  const auto pierce_interior = stream({2}, "pierce", offset_tail(IntMap::cyclic(Integer(1), 2)));
  const auto alt_25 = alternating_stream_of(oracle::q(2, 5), builtin("alt-luroth"));
  const auto alt_37 = alternating_stream_of(oracle::q(3, 7), builtin("alt-luroth"));
  const auto engel_regular = stream({3}, "engel", offset_tail(cst(1)));
  const auto pierce_regular = stream({3}, "pierce", offset_tail(IntMap::cyclic(Integer(1), 2)));

  return {
      // k_n -> infinity suffices for any x0.
      {"opaque luroth, k=n", pos, "luroth", InteriorPoint{stream({3}, "luroth", opaque_tail())},
       DisagreeFamily{aff(1, 0)}, P::p_kn_sufficient, C},
      {"opaque engel, k=2n+1", pos, "engel", InteriorPoint{stream({3}, "engel", opaque_tail())},
       DisagreeFamily{aff(2, 1)}, P::p_kn_sufficient, C},
      {"opaque pierce, k=n+3", pos, "pierce", InteriorPoint{stream({2}, "pierce", opaque_tail())},
       DisagreeFamily{aff(1, 3)}, P::p_kn_sufficient, C},
      {"opaque luroth, k=2 (case 1)", pos, "luroth", InteriorPoint{stream({3}, "luroth", opaque_tail())},
       DisagreeFamily{cst(2)}, P::p_kn_sufficient, D},
      {"opaque engel, k bounded on odd n (case 2)", pos, "engel", InteriorPoint{stream({3}, "engel", opaque_tail())},
       DisagreeFamily{bounded_on_odd(aff(1, 0), 3)}, P::p_kn_sufficient, D},

      // Interior points.
      {"luroth 2/5, k=n", pos, "luroth", InteriorPoint{periodic_25}, DisagreeFamily{aff(1, 0)}, P::p_interior, C},
      {"engel offset 1, k=2n", pos, "engel", InteriorPoint{engel_interior}, DisagreeFamily{aff(2, 0)}, P::p_interior, C},
      {"pierce offsets 1,2, k=n+1, delta -1", pos, "pierce", InteriorPoint{pierce_interior},
       DisagreeFamily{aff(1, 1), cst(-1)}, P::p_interior, C},
      {"luroth 2/5, k=1 (case 1)", pos, "luroth", InteriorPoint{periodic_25}, DisagreeFamily{cst(1)}, P::p_interior, D},
      {"pierce offsets 1,2, k bounded on odd n (case 2)", pos, "pierce", InteriorPoint{pierce_interior},
       DisagreeFamily{bounded_on_odd(aff(1, 1), 2)}, P::p_interior, D},

      // Supremum approached from the left.
      {"luroth sup (4), k=n+1", pos, "luroth", SupremumOf{base({4}, "luroth")}, DisagreeFamily{aff(1, 1)},
       P::p_left_supremum, C},
      {"engel sup (3,3), k=2n", pos, "engel", SupremumOf{base({3, 3}, "engel")}, DisagreeFamily{aff(2, 0)},
       P::p_left_supremum, C},
      {"pierce sup (3,5), k=n+5, delta=n", pos, "pierce", SupremumOf{base({3, 5}, "pierce")},
       DisagreeFamily{aff(1, 5), aff(1, 0)}, P::p_left_supremum, C},
      {"luroth sup (4), k=1 (case 1)", pos, "luroth", SupremumOf{base({4}, "luroth")}, DisagreeFamily{cst(1)},
       P::p_left_supremum, D},
      {"luroth sup (4), digits (4, n+2) (case 2)", pos, "luroth", SupremumOf{base({4}, "luroth")},
       prefix_then_digit(base({4}, "luroth"), aff(1, 2)), P::p_left_supremum, D},

      // Infimum approached from the right.
      {"luroth inf (2), (2, n+2)", pos, "luroth", InfimumOf{base({2}, "luroth")},
       prefix_then_digit(base({2}, "luroth"), aff(1, 2)), P::p_right_infimum, C},
      {"engel inf (3,4), (3,4, n+4)", pos, "engel", InfimumOf{base({3, 4}, "engel")},
       prefix_then_digit(base({3, 4}, "engel"), aff(1, 4)), P::p_right_infimum, C},
      {"pierce inf (2,4), (2,4, 2n+5)", pos, "pierce", InfimumOf{base({2, 4}, "pierce")},
       prefix_then_digit(base({2, 4}, "pierce"), aff(2, 5), offset_tail(cst(1))), P::p_right_infimum, C},
      {"luroth inf (3), first digit 2 (case 1)", pos, "luroth", InfimumOf{base({3}, "luroth")}, first_digit(cst(2)),
       P::p_right_infimum, D},
      {"engel inf (3,4), digits (3,3) (case 1)", pos, "engel", InfimumOf{base({3, 4}, "engel")},
       prefix_then_digit(base({3}, "engel"), cst(3)), P::p_right_infimum, D},
      {"luroth inf (2), (2, 5) (case 2)", pos, "luroth", InfimumOf{base({2}, "luroth")},
       prefix_then_digit(base({2}, "luroth"), cst(5)), P::p_right_infimum, D},

      // Zero, P side.
      {"luroth first digit n+2", pos, "luroth", ZeroTarget{}, first_digit(aff(1, 2)), P::p_zero, C},
      {"engel first digit n^2+2", pos, "engel", ZeroTarget{}, first_digit(IntMap::polynomial({Integer(2), Integer(0), Integer(1)})),
       P::p_zero, C},
      {"pierce first digit 2n+3, offset tail", pos, "pierce", ZeroTarget{}, first_digit(aff(2, 3), offset_tail(cst(1))),
       P::p_zero, C},
      {"luroth first digit 5 (case 1)", pos, "luroth", ZeroTarget{}, first_digit(cst(5)), P::p_zero, D},
      {"engel first digit bounded on odd n (case 2)", pos, "engel", ZeroTarget{}, first_digit(bounded_on_odd(aff(1, 2), 3)),
       P::p_zero, D},

      // Points outside IS.
      {"alt-luroth 2/5, k=n", alt, "alt-luroth", RegularPoint{alt_25}, DisagreeFamily{aff(1, 0)}, P::pm_regular, C},
      {"alt-luroth 3/7, k=2n+1", alt, "alt-luroth", RegularPoint{alt_37}, DisagreeFamily{aff(2, 1)}, P::pm_regular, C},
      {"engel offset 1, k=n+2", alt, "engel", RegularPoint{engel_regular}, DisagreeFamily{aff(1, 2)}, P::pm_regular, C},
      {"pierce offsets 1,2, k=n+1, delta -1", alt, "pierce", RegularPoint{pierce_regular},
       DisagreeFamily{aff(1, 1), cst(-1)}, P::pm_regular, C},
      {"alt-luroth 2/5, k=1 (case 1)", alt, "alt-luroth", RegularPoint{alt_25}, DisagreeFamily{cst(1)}, P::pm_regular, D},
      {"engel offset 1, k bounded on odd n (case 2)", alt, "engel", RegularPoint{engel_regular},
       DisagreeFamily{bounded_on_odd(aff(1, 2), 2)}, P::pm_regular, D},

      // Zero, P- side.
      {"pierce first digit n+2", alt, "pierce", ZeroTarget{}, first_digit(aff(1, 2)), P::pm_zero, C},
      {"alt-luroth first digit 3n", alt, "alt-luroth", ZeroTarget{}, first_digit(aff(3, 0)), P::pm_zero, C},
      {"engel first digit n+5, offset tail", alt, "engel", ZeroTarget{}, first_digit(aff(1, 5), offset_tail(cst(2))),
       P::pm_zero, C},
      {"pierce first digit 4 (case 1)", alt, "pierce", ZeroTarget{}, first_digit(cst(4)), P::pm_zero, D},
      {"alt-luroth first digit bounded on odd n (case 2)", alt, "alt-luroth", ZeroTarget{},
       first_digit(bounded_on_odd(aff(1, 2), 3)), P::pm_zero, D},

      // Odd-rank supremum from the left.
      {"pierce sup (3), (3, n+3)", alt, "pierce", OddSupOf{base({3}, "pierce")},
       prefix_then_digit(base({3}, "pierce"), aff(1, 3)), P::pm_odd_supremum, C},
      {"alt-luroth sup (3,2,4), (3,2,4, n+2)", alt, "alt-luroth", OddSupOf{base({3, 2, 4}, "alt-luroth")},
       prefix_then_digit(base({3, 2, 4}, "alt-luroth"), aff(1, 2)), P::pm_odd_supremum, C},
      {"engel sup (3), (3, 2n+3)", alt, "engel", OddSupOf{base({3}, "engel")},
       prefix_then_digit(base({3}, "engel"), aff(2, 3)), P::pm_odd_supremum, C},
      {"pierce sup (3), first digit 4 (case 1)", alt, "pierce", OddSupOf{base({3}, "pierce")}, first_digit(cst(4)),
       P::pm_odd_supremum, D},
      {"alt-luroth sup (3,2,4), (3,2,4, 5) (case 2)", alt, "alt-luroth", OddSupOf{base({3, 2, 4}, "alt-luroth")},
       prefix_then_digit(base({3, 2, 4}, "alt-luroth"), cst(5)), P::pm_odd_supremum, D},

      // Even-rank infimum from the right.
      {"alt-luroth inf (3,2), (3,2, n+1)", alt, "alt-luroth", EvenInfOf{base({3, 2}, "alt-luroth")},
       prefix_then_digit(base({3, 2}, "alt-luroth"), aff(1, 1)), P::pm_even_infimum, C},
      {"pierce inf (3,4), (3,4, n+5)", alt, "pierce", EvenInfOf{base({3, 4}, "pierce")},
       prefix_then_digit(base({3, 4}, "pierce"), aff(1, 5)), P::pm_even_infimum, C},
      {"engel inf (3,4), (3,4, 2n+4)", alt, "engel", EvenInfOf{base({3, 4}, "engel")},
       prefix_then_digit(base({3, 4}, "engel"), aff(2, 4)), P::pm_even_infimum, C},
      {"alt-luroth inf (3,2), digits (3,3) (case 1)", alt, "alt-luroth", EvenInfOf{base({3, 2}, "alt-luroth")},
       prefix_then_digit(base({3}, "alt-luroth"), cst(3)), P::pm_even_infimum, D},
      {"alt-luroth inf (3,2), (3,2, 4) (case 2)", alt, "alt-luroth", EvenInfOf{base({3, 2}, "alt-luroth")},
       prefix_then_digit(base({3, 2}, "alt-luroth"), cst(4)), P::pm_even_infimum, D},
  };
}

std::optional<DigitStream> target_stream(const LimitTarget& t) {
  if (const auto* p = std::get_if<InteriorPoint>(&t)) return p->x0;
  if (const auto* p = std::get_if<RegularPoint>(&t)) return p->x0;
  if (const auto* p = std::get_if<SupremumOf>(&t)) return DigitStream(p->base, minimal_tail());
  if (const auto* p = std::get_if<InfimumOf>(&t)) {
    // inf of a P cylinder is the supremum of its right neighbor.
    return DigitStream(p->base.with_last_digit(p->base.last_digit() + 1), minimal_tail());
  }
  return std::nullopt;
}

// Oracle enclosure of x0 and of x_n.
Span oracle_target(const ConvergenceCase& c, const oracle::RFn& r, std::size_t depth) {
  if (std::holds_alternative<ZeroTarget>(c.target)) return {0, 0};
  if (const auto* t = std::get_if<SupremumOf>(&c.target)) {
    const auto v = oracle::p_cylinder(t->base.digits(), r).sup;
    return {v, v};
  }
  if (const auto* t = std::get_if<InfimumOf>(&c.target)) {
    const auto v = oracle::p_cylinder(t->base.digits(), r).inf;
    return {v, v};
  }
  if (const auto* t = std::get_if<OddSupOf>(&c.target)) {
    const auto v = oracle::pm_cylinder(t->base.digits(), r).sup;
    return {v, v};
  }
  if (const auto* t = std::get_if<EvenInfOf>(&c.target)) {
    const auto v = oracle::pm_cylinder(t->base.digits(), r).inf;
    return {v, v};
  }
  const auto digits = target_stream(c.target)->digits(depth).digits();
  const auto iv = c.rep == Representation::positive ? oracle::p_cylinder(digits, r) : oracle::pm_cylinder(digits, r);
  return {iv.inf, iv.sup};
}

Span oracle_element(const ConvergenceCase& c, const oracle::RFn& r, const DigitStream& e, std::size_t extra) {
  const auto& prefix = e.prefix().digits();
  if (c.rep == Representation::positive && e.has_minimal_tail()) {
    const auto v = oracle::p_cylinder(prefix, r).sup;
    return {v, v};
  }
  std::vector<oracle::Z> digits;
  if (e.has_minimal_tail()) {
    digits = with_minimal_digits(prefix, r, extra);
  } else {
    digits = e.digits(prefix.size() + extra).digits();
  }
  const auto iv = c.rep == Representation::positive ? oracle::p_cylinder(digits, r) : oracle::pm_cylinder(digits, r);
  return {iv.inf, iv.sup};
}

void convergence_criteria(Outcome& o) {
  const auto t0 = Clock::now();
  const auto samples = default_samples();
  std::map<Proposition, std::pair<int, int>> tally;  // converges, diverges
  std::size_t cross_checked = 0;
  for (const auto& c : convergence_cases()) {
    const DigitRule rule = builtin(c.system);
    const auto r = oracle::r_for(c.system);
    const std::string where = "[" + std::string(to_string(c.proposition)) + "] " + c.label;
    const ConvergenceVerdict v = decide(c.rep, rule, c.target, c.family);
    o.check(v.proposition == c.proposition, where + ": proposition " + std::string(to_string(v.proposition)));
    o.check(v.verdict == c.expected, where + ": verdict " + std::string(to_string(v.verdict)) + " (" + v.reason + ")");
    o.check(v.evidence_holds(), where + ": evidence does not hold");
    if (v.verdict != c.expected) continue;
    if (c.expected == Verdict::converges) {
      std::vector<std::uint64_t> ns;
      for (const auto& row : v.evidence) ns.push_back(row.n);
      o.check(ns == samples, where + ": evidence does not cover n = 1..1024");
    } else {
      o.check(v.witness.has_value() && v.witness->gap > 0, where + ": no positive separation gap");
      o.check(!v.evidence.empty(), where + ": no gap evidence");
    }
    const auto x0 = target_stream(c.target);
    for (const auto& row : v.evidence) {
      const DigitStream e = family_element(c.family, rule, row.n, x0);
      const std::size_t depth = e.prefix().rank() + 64;
      const Span xn = oracle_element(c, r, e, 64);
      const Span target = oracle_target(c, r, depth);
      const std::string at = where + " n=" + std::to_string(row.n);
      if (row.bound) {
        o.check(distance_upper(xn, target) <= *row.bound, at + ": series distance exceeds bound");
      }
      if (row.gap) {
        o.check(distance_lower(xn, target) >= *row.gap, at + ": series distance below gap");
      }
      o.check(row.distance_lower <= distance_upper(xn, target) && distance_lower(xn, target) <= row.distance_upper,
              at + ": reported distance inconsistent with series");
      ++cross_checked;
    }
    auto& t = tally[c.proposition];
    (c.expected == Verdict::converges ? t.first : t.second)++;
  }
  for (const auto& [p, t] : tally) {
    o.check(t.first >= 3 && t.second >= 2, std::string(to_string(p)) + " has too few families");
  }
  o.check(tally.size() == 9, "only " + std::to_string(tally.size()) + " propositions covered");
  const double s = seconds_since(t0);
  o.check(s < 30.0, "took " + fmt_seconds(s));
  o.detail = std::to_string(tally.size()) + " propositions, " + std::to_string(cross_checked) +
             " evidence rows cross-checked against series distances in " + fmt_seconds(s);
}

// ------------------------------------------------------------ criterion 7

void is_trichotomy(Outcome& o) {
  oracle::Gen g(7007);
  constexpr std::size_t depth = 64;
  std::map<std::string, std::array<int, 3>> counts;
  std::vector<std::string> size_limited;
  for (const auto& name : kSystems) {
    const DigitRule rule = builtin(name);
    const auto r = oracle::r_for(name);
    for (int i = 0; i < 200; ++i) {
      const auto x = g.rational_open(1000000);
      const ISResult res = is_member_IS(x, rule, depth);
      const std::string where = name + " " + x.get_str();

      // Independent orbit, as far as the engine could follow it.
      const auto* up_to = std::get_if<ISNotMemberUpToDepth>(&res.outcome);
      const std::size_t reach = up_to && up_to->size_limited ? up_to->depth : depth;
      std::vector<oracle::Z> digits;
      std::vector<oracle::Q> remainders;
      oracle::Q y = x;
      bool hit_endpoint = false;
      for (std::size_t j = 0; j < reach; ++j) {
        const auto step = oracle::pm_step(y, r(digits));
        remainders.push_back(y);
        if (step.digit == 0) {
          hit_endpoint = true;
          break;
        }
        digits.push_back(step.digit);
        y = step.next;
      }

      if (const ISMember* m = res.member()) {
        ++counts[name][0];
        o.check(hit_endpoint && m->step == digits.size(), where + ": member step differs from the orbit");
        o.check(m->witness.rank() % 2 == 1, where + ": witness has even rank");
        o.check(oracle::pm_cylinder(m->witness.digits(), r).sup == x, where + ": witness supremum differs from x");
      } else if (const ISNotMember* cyc = res.cycle()) {
        ++counts[name][1];
        const std::size_t s = cyc->cycle_start, len = cyc->cycle_length;
        o.check(!hit_endpoint || digits.size() > s + len, where + ": cycle reported but the orbit ends");
        // Re-run the cycle with the oracle map and check it closes.
        std::vector<oracle::Z> d;
        oracle::Q z = x;
        std::vector<oracle::Q> seen;
        bool closed = false;
        for (std::size_t j = 0; j < s + len; ++j) {
          seen.push_back(z);
          const auto step = oracle::pm_step(z, r(d));
          if (step.digit == 0) break;
          d.push_back(step.digit);
          z = step.next;
          closed = j + 1 == s + len;
        }
        o.check(closed && z == seen[s] && r(d) == r(truncated(d, s)), where + ": cycle does not close under the series map");
        o.check(s >= rule.memoryless_from(), where + ": cycle starts before the rule is memoryless");
        o.check(cyc->cycle_remainders.size() == len && cyc->cycle_remainders.front() == seen[s],
                where + ": cycle remainders differ");
        for (std::size_t j = 0; j < d.size(); ++j) {
          o.check(res.digits.digit(j + 1) == d[j], where + ": cycle digits differ");
        }
      } else {
        ++counts[name][2];
        if (up_to->size_limited) {
          size_limited.push_back(where + " stopped at depth " + std::to_string(up_to->depth));
        } else {
          o.check(up_to->depth == depth, where + ": depth " + std::to_string(up_to->depth));
        }
        o.check(!hit_endpoint && digits.size() == reach, where + ": orbit ends within the depth");
        o.check(res.digits.digits() == digits, where + ": digits differ from the orbit");
        // Every enclosure up to the depth holds x strictly inside and shrinks.
        oracle::Q last_diam = 2;
        for (std::size_t j = 1; j <= reach; ++j) {
          const auto iv = oracle::pm_cylinder(truncated(digits, j), r);
          o.check(iv.inf < x && x < iv.sup && iv.diam < last_diam, where + ": enclosure at depth " + std::to_string(j));
          last_diam = iv.diam;
        }
      }
    }
  }
  std::ostringstream detail;
  detail << "200 rationals per system (member/cycle/depth-64):";
  for (const auto& name : kSystems) {
    const auto& c = counts[name];
    detail << " " << name << " " << c[0] << "/" << c[1] << "/" << c[2];
  }
  // Exact orbits whose digits outgrow the bit budget cannot reach depth 64.
  for (const auto& w : size_limited) o.fail("digit size budget hit: " + w);
  if (!size_limited.empty()) detail << "; " << size_limited.size() << " orbit(s) stopped by the digit size budget";
  o.detail = detail.str();
}

// ------------------------------------------------------------ criterion 8

void suite_time(Outcome& o, const std::vector<std::string>& binaries, Clock::time_point started) {
  const auto t0 = Clock::now();
  o.check(!binaries.empty(), "no test binaries given");
  for (const auto& bin : binaries) {
    const std::string cmd = "\"" + bin + "\" > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    o.check(rc == 0, bin + " exited with status " + std::to_string(rc));
  }
  const double unit = seconds_since(t0);
  const double total = seconds_since(started);
  o.check(total < 120.0, "suite took " + fmt_seconds(total));
  o.detail = std::to_string(binaries.size()) + " unit binaries in " + fmt_seconds(unit) +
             ", whole suite including this binary " + fmt_seconds(total);
}

}  // namespace

int main(int argc, char** argv) {
  const auto started = Clock::now();
  const std::vector<std::string> binaries(argv + 1, argv + argc);

  run_criterion(1, "cylinder endpoints and diameters", cylinder_geometry);
  run_criterion(2, "rank-1 cylinders", rank_one_endpoints);
  run_criterion(3, "classical expansions", classical_expansions);
  run_criterion(4, "diameter decay", diameter_decay);
  run_criterion(5, "endpoint identities", identities);
  run_criterion(6, "convergence propositions", convergence_criteria);
  run_criterion(7, "IS membership trichotomy", is_trichotomy);
  run_criterion(8, "suite runtime", [&](Outcome& o) { suite_time(o, binaries, started); });

  std::cout << (failures ? "FAILED " + std::to_string(failures) + " criteria" : std::string("all criteria passed"))
            << std::endl;
  return failures ? 1 : 0;
}
