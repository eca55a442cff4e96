#include <perron/alternating.hpp>
#include <perron/convergence.hpp>
#include <perron/positive.hpp>

#include <benchmark/benchmark.h>

using namespace perron;

namespace {

PrefixBase minimal_prefix(const DigitRule& rule, std::size_t rank) {
  PrefixBase base(rule);
  for (std::size_t i = 0; i < rank; ++i) base.append(base.min_next_digit() + 1);
  return base;
}

void BM_PCylinder(benchmark::State& state) {
  const PrefixBase base = minimal_prefix(builtin("pierce"), static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(p_cylinder(base));
}
BENCHMARK(BM_PCylinder)->RangeMultiplier(4)->Range(4, 1024);

void BM_PmCylinder(benchmark::State& state) {
  const PrefixBase base = minimal_prefix(builtin("alt-luroth"), static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pm_cylinder(base));
}
BENCHMARK(BM_PmCylinder)->RangeMultiplier(4)->Range(4, 1024);

void BM_PrefixValidate(benchmark::State& state) {
  const DigitRule rule = builtin("engel");
  const auto digits = minimal_prefix(rule, static_cast<std::size_t>(state.range(0))).digits();
  for (auto _ : state) benchmark::DoNotOptimize(PrefixBase::validate(rule, digits));
}
BENCHMARK(BM_PrefixValidate)->RangeMultiplier(4)->Range(4, 1024);

void BM_DigitsOf(benchmark::State& state) {
  const DigitRule rule = builtin("luroth");
  const Rational x = make_rational(Integer(314159), Integer(1000003));
  for (auto _ : state) benchmark::DoNotOptimize(digits_of(x, rule, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_DigitsOf)->Arg(16)->Arg(64)->Arg(256);

void BM_IsMember(benchmark::State& state) {
  const DigitRule rule = builtin("alt-luroth");
  const Rational x = make_rational(Integer(271828), Integer(1000003));
  for (auto _ : state) benchmark::DoNotOptimize(is_member_IS(x, rule, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_IsMember)->Arg(64)->Arg(256);

void BM_DecideInterior(benchmark::State& state) {
  const DigitRule rule = builtin("luroth");
  const InteriorPoint target{positive_stream_of(make_rational(Integer(2), Integer(5)), rule)};
  const SequenceFamily family = DisagreeFamily{IntMap::affine(Integer(1), Integer(0))};
  for (auto _ : state) benchmark::DoNotOptimize(decide_P(rule, target, family));
}
BENCHMARK(BM_DecideInterior)->Unit(benchmark::kMillisecond);

void BM_DecideOddSupremum(benchmark::State& state) {
  const DigitRule rule = builtin("pierce");
  const PrefixBase base = validate_prefix({3}, rule);
  const SequenceFamily family = prefix_then_digit(base, IntMap::affine(Integer(1), Integer(3)));
  for (auto _ : state) benchmark::DoNotOptimize(decide_Pminus(rule, OddSupOf{base}, family));
}
BENCHMARK(BM_DecideOddSupremum)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
