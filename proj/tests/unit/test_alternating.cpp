#include <perron/alternating.hpp>
#include <perron/errors.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <map>

#include "oracles.hpp"

using namespace perron;

namespace {

Rational q(long n, long d) { return make_rational(Integer(n), Integer(d)); }

bool all_hold(const std::vector<IdentityCheck>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.holds; });
}

bool has(const std::vector<IdentityCheck>& checks, const std::string& name) {
  return std::any_of(checks.begin(), checks.end(), [&](const IdentityCheck& c) { return c.name == name; });
}

}  // namespace

TEST(PmCylinder, AltLurothRankOne) {
  const PMinusCylinder c = pm_cylinder(validate_prefix({3}, builtin("alt-luroth")));
  EXPECT_EQ(c.parity, Parity::odd);
  EXPECT_EQ(c.geometry.sup, q(1, 2));
  EXPECT_EQ(c.geometry.inf, q(1, 3));
  EXPECT_EQ(c.geometry.diam, q(1, 6));
}

TEST(PmCylinder, MinimalFirstDigitReachesOne) {
  for (const std::string name : builtin_names()) {
    const auto rule = builtin(name);
    const PrefixBase base = PrefixBase(rule).extended(Integer(2));
    EXPECT_EQ(pm_sup(base), 1) << name;
  }
}

TEST(PmCylinder, AltLurothRankTwoSitsInsideParent) {
  const auto rule = builtin("alt-luroth");
  const PMinusCylinder c = pm_cylinder(validate_prefix({3, 2}, rule));
  EXPECT_EQ(c.parity, Parity::even);
  EXPECT_EQ(c.geometry.inf, q(1, 3));
  EXPECT_EQ(c.geometry.sup, q(5, 12));
  const auto o = oracle::pm_cylinder(c.base.digits(), oracle::r_luroth());
  EXPECT_EQ(c.geometry.inf, o.inf);
  EXPECT_EQ(c.geometry.sup, o.sup);
}

TEST(PmDigits, PierceOneHalfIsMember) {
  const auto result = pm_digits_of(q(1, 2), builtin("pierce"), 8);
  const auto* member = std::get_if<ISMember>(&result);
  ASSERT_NE(member, nullptr);
  EXPECT_EQ(format_digits(member->witness.digits()), "3");
  EXPECT_EQ(pm_sup(member->witness), q(1, 2));
}

TEST(PmDigits, AltLurothTwoFifthsCycles) {
  const auto result = pm_digits_of(q(2, 5), builtin("alt-luroth"), 6);
  const auto* digits = std::get_if<PrefixBase>(&result);
  ASSERT_NE(digits, nullptr);
  EXPECT_EQ(format_digits(digits->digits()), "3 2 2 3 2 2");
  // Partial sums of the alternating series stay inside every prefix cylinder.
  for (std::size_t k = 1; k <= 6; ++k) {
    const auto o = oracle::pm_cylinder(digits->truncated(k).digits(), oracle::r_luroth());
    EXPECT_TRUE(o.inf < q(2, 5) && q(2, 5) < o.sup);
  }
}

TEST(PmDigits, PierceTwoFifthsIsMemberLikeFinitePierce) {
  const auto result = pm_digits_of(q(2, 5), builtin("pierce"), 8);
  ASSERT_TRUE(std::holds_alternative<ISMember>(result));
  EXPECT_EQ(q(1, 2) - q(1, 10), q(2, 5));
  const auto pierce = oracle::pierce(oracle::q(2, 5), 10);
  EXPECT_TRUE(pierce.terminated);
  EXPECT_EQ(std::get<ISMember>(result).step, pierce.a.size());
}

TEST(PmDigits, RejectsOutOfDomain) {
  EXPECT_THROW(pm_digits_of(Rational(1), builtin("pierce"), 3), OutOfDomain);
  EXPECT_THROW(pm_digits_of(Rational(0), builtin("pierce"), 3), OutOfDomain);
}

TEST(IsMember, AltLurothTwoFifthsCycleWitness) {
  const ISResult r = is_member_IS(q(2, 5), builtin("alt-luroth"), 64);
  const ISNotMember* cycle = r.cycle();
  ASSERT_NE(cycle, nullptr);
  EXPECT_EQ(cycle->cycle_length, 3u);
  EXPECT_EQ(cycle->cycle_remainders, (std::vector<Rational>{q(2, 5), q(3, 5), q(4, 5)}));
}

TEST(IsMember, PierceOneHalf) {
  const ISResult r = is_member_IS(q(1, 2), builtin("pierce"), 64);
  ASSERT_TRUE(r.is_member());
  EXPECT_EQ(format_digits(r.member()->witness.digits()), "3");
}

// r0/(r0+2) is the supremum of the rank-one cylinder with first digit r0+3
// (and the infimum of the one with digit r0+2).
TEST(IsMember, RankOneEndpointWitness) {
  for (long phi0 = 1; phi0 <= 3; ++phi0) {
    const DigitRule rule(SystemDescriptor{"phi", Integer(phi0), {RuleTemplate::constant, 1}, {}});
    const ISResult r = is_member_IS(q(phi0, phi0 + 2), rule, 64);
    ASSERT_TRUE(r.is_member());
    EXPECT_EQ(r.member()->witness.digits(), (std::vector<Integer>{Integer(phi0 + 3)}));
    EXPECT_EQ(pm_sup(r.member()->witness), q(phi0, phi0 + 2));
    EXPECT_EQ(pm_inf(validate_prefix({phi0 + 2}, rule)), q(phi0, phi0 + 2));
  }
}

TEST(IsMember, OddStepWitnessUsesMinimalDigit) {
  // 5/12 = sup of [3,2] (even rank) is reached at step 1; the witness is odd.
  const auto rule = builtin("alt-luroth");
  const ISResult r = is_member_IS(q(5, 12), rule, 64);
  ASSERT_TRUE(r.is_member());
  EXPECT_EQ(r.member()->witness.rank() % 2, 1u);
  EXPECT_EQ(pm_sup(r.member()->witness), q(5, 12));
}

// Digits of this Engel orbit double in length every two steps.
TEST(IsMember, DigitBudgetStopsExplodingOrbit) {
  const Rational x = q(340831, 493760);
  const ISResult r = is_member_IS(x, builtin("engel"), 64, 4096);
  const auto* up_to = std::get_if<ISNotMemberUpToDepth>(&r.outcome);
  ASSERT_NE(up_to, nullptr);
  EXPECT_TRUE(up_to->size_limited);
  EXPECT_LT(up_to->depth, 64u);
  EXPECT_EQ(r.digits.rank(), up_to->depth);
  EXPECT_GT(mpz_sizeinbase(r.digits.last_digit().get_mpz_t(), 2), 4096u);
  const auto pm = oracle::pm_cylinder(r.digits.digits(), oracle::r_engel());
  EXPECT_TRUE(pm.inf < x && x < pm.sup);

  const ISResult unlimited = is_member_IS(x, builtin("engel"), 20, 0);
  const auto* plain = std::get_if<ISNotMemberUpToDepth>(&unlimited.outcome);
  ASSERT_NE(plain, nullptr);
  EXPECT_FALSE(plain->size_limited);
  EXPECT_EQ(plain->depth, 20u);
}

TEST(StreamOf, MemberRejected) {
  EXPECT_THROW(alternating_stream_of(q(1, 2), builtin("pierce")), OutOfDomain);
  const DigitStream s = alternating_stream_of(q(2, 5), builtin("alt-luroth"));
  const Enclosure e = pm_eval_stream(s, 20);
  EXPECT_TRUE(e.contains(q(2, 5)));
  EXPECT_EQ(format_digits(s.digits(9).digits()), "3 2 2 3 2 2 3 2 2");
}

TEST(Identities, AltLurothRankOne) {
  const auto checks = odd_identities(validate_prefix({3}, builtin("alt-luroth")));
  EXPECT_TRUE(all_hold(checks));
  EXPECT_EQ(pm_sup(validate_prefix({4}, builtin("alt-luroth"))), q(1, 3));
  EXPECT_EQ(pm_inf(validate_prefix({3, 2}, builtin("alt-luroth"))), q(1, 3));
}

TEST(Identities, PierceEvenMinimalBranch) {
  const auto rule = builtin("pierce");
  const auto checks = even_identities(validate_prefix({3, 4}, rule));
  EXPECT_TRUE(all_hold(checks));
  EXPECT_TRUE(has(checks, "inf-minimal-digit"));
  EXPECT_EQ(pm_inf(validate_prefix({3, 4}, rule)), pm_inf(validate_prefix({3}, rule)));
  EXPECT_EQ(pm_inf(validate_prefix({3}, rule)), pm_sup(validate_prefix({4}, rule)));
}

TEST(Identities, PierceEvenNonMinimalBranch) {
  const auto checks = even_identities(validate_prefix({3, 6}, builtin("pierce")));
  EXPECT_TRUE(all_hold(checks));
  EXPECT_TRUE(has(checks, "inf-non-minimal-digit"));
}

TEST(Identities, WrongParityThrows) {
  EXPECT_THROW(odd_identities(validate_prefix({3, 4}, builtin("pierce"))), OutOfDomain);
  EXPECT_THROW(even_identities(validate_prefix({3}, builtin("pierce"))), OutOfDomain);
}

TEST(EvenInfimumBase, MatchesSupremum) {
  const auto rule = builtin("alt-luroth");
  for (const auto& digits : {std::vector<long>{3}, {3, 2, 2}, {5, 4, 7}}) {
    std::vector<Integer> c(digits.begin(), digits.end());
    const PrefixBase w = PrefixBase::validate(rule, c);
    const auto e = even_infimum_base(w);
    ASSERT_TRUE(e.has_value());
    EXPECT_EQ(e->rank() % 2, 0u);
    EXPECT_EQ(pm_inf(*e), pm_sup(w));
  }
  EXPECT_FALSE(even_infimum_base(validate_prefix({2}, rule)).has_value());
}

// ------------------------------------------------------------ properties

TEST(Property, ParityFormulasMatchSeriesOracle) {
  oracle::Gen g(201);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::string name = builtin_names()[trial % 5];
    const auto r = oracle::r_for(name);
    const auto c = oracle::random_base(g, r, g.uniform(1, 8));
    const PMinusCylinder cyl = pm_cylinder(PrefixBase::validate(builtin(name), c));
    const auto o = oracle::pm_cylinder(c, r);
    ASSERT_EQ(cyl.geometry.sup - cyl.geometry.inf, cyl.geometry.diam);
    ASSERT_EQ(cyl.geometry.inf, o.inf) << name << " " << format_digits(c);
    ASSERT_EQ(cyl.geometry.sup, o.sup);
    ASSERT_EQ(cyl.parity, c.size() % 2 ? Parity::odd : Parity::even);
  }
}

TEST(Property, OrientationFlipAndAbutment) {
  oracle::Gen g(202);
  for (int trial = 0; trial < 500; ++trial) {
    const std::string name = builtin_names()[trial % 5];
    const PrefixBase parent =
        PrefixBase::validate(builtin(name), oracle::random_base(g, oracle::r_for(name), g.uniform(0, 6)));
    const PMinusCylinder p = pm_cylinder(parent);
    const Integer d = parent.min_next_digit() + static_cast<unsigned long>(g.offset());
    const CylinderGeometry a = pm_cylinder(parent.extended(d)).geometry;
    const CylinderGeometry b = pm_cylinder(parent.extended(d + 1)).geometry;
    if (parent.rank() % 2 == 1) {
      EXPECT_EQ(a.sup, b.inf);  // larger digit to the right
    } else {
      EXPECT_EQ(b.sup, a.inf);  // larger digit to the left
    }
    EXPECT_LE(p.geometry.inf, std::min(a.inf, b.inf));
    EXPECT_GE(p.geometry.sup, std::max(a.sup, b.sup));
    EXPECT_LE(a.diam * 2, p.geometry.diam);
  }
}

TEST(Property, ExtractionStrictlyEnclosesEveryStep) {
  oracle::Gen g(203);
  for (int trial = 0; trial < 300; ++trial) {
    const std::string name = builtin_names()[trial % 5];
    const DigitRule rule = builtin(name);
    const Rational x = g.rational_open(100000);
    const auto result = pm_digits_of(x, rule, 12);
    if (const auto* member = std::get_if<ISMember>(&result)) {
      EXPECT_EQ(pm_sup(member->witness), x);
      EXPECT_EQ(member->witness.rank() % 2, 1u);
      continue;
    }
    const auto& digits = std::get<PrefixBase>(result);
    for (std::size_t k = 1; k <= digits.rank(); ++k) {
      const auto o = oracle::pm_cylinder(digits.truncated(k).digits(), oracle::r_for(name));
      ASSERT_TRUE(o.inf < x && x < o.sup) << name << " " << to_string(x) << " k=" << k;
    }
  }
}

TEST(Property, EngineMatchesSeriesRemainderMap) {
  oracle::Gen g(204);
  for (int trial = 0; trial < 200; ++trial) {
    const std::string name = builtin_names()[trial % 5];
    const auto r = oracle::r_for(name);
    const Rational x = g.rational_open(5000);
    const Orbit orbit = alternating_orbit(x, builtin(name), 20);
    oracle::Q y = x;
    std::vector<oracle::Z> c;
    for (std::size_t j = 0; j <= orbit.digits.rank(); ++j) {
      const auto step = oracle::pm_step(y, r(c));
      if (step.digit == 0) {
        EXPECT_EQ(j, orbit.digits.rank());
        EXPECT_EQ(orbit.end, Orbit::End::endpoint);
        break;
      }
      if (j == orbit.digits.rank()) break;
      EXPECT_EQ(step.digit, orbit.digits.digit(j + 1));
      c.push_back(step.digit);
      y = step.next;
    }
  }
}

TEST(Property, CyclesAreGenuine) {
  oracle::Gen g(205);
  int cycles = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Rational x = g.rational_open(60);
    const ISResult r = is_member_IS(x, builtin("alt-luroth"), 64);
    if (const ISNotMember* cyc = r.cycle()) {
      ++cycles;
      // One more pass over the cycle returns to its first remainder.
      oracle::Q y = cyc->cycle_remainders.front();
      for (std::size_t i = 0; i < cyc->cycle_length; ++i) y = oracle::pm_step(y, 1).next;
      EXPECT_EQ(y, cyc->cycle_remainders.front());
    }
  }
  EXPECT_GT(cycles, 50);
}
