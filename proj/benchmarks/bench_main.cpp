#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "smaug/authflow.hpp"
#include "smaug/dtw.hpp"
#include "smaug/features.hpp"
#include "smaug/preprocess.hpp"
#include "smaug/synth.hpp"

namespace {

using namespace smaug;

void BM_Dtw(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> v(-10, 10);
  std::vector<double> a(n), b(n);
  for (auto& x : a) x = v(rng);
  for (auto& x : b) x = v(rng);
  for (auto _ : state) benchmark::DoNotOptimize(dtw(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Dtw)->RangeMultiplier(4)->Range(16, 1024)->Complexity(benchmark::oNSquared);

void BM_Preprocess(benchmark::State& state) {
  const auto trace = synth::gen_trace(synth::find_shape("Bar"), synth::default_user_profile(), 1);
  for (auto _ : state) benchmark::DoNotOptimize(preprocess(trace));
}
BENCHMARK(BM_Preprocess);

void BM_ExtractFeatures(benchmark::State& state) {
  const auto processed = preprocess(synth::gen_trace(synth::find_shape("Bar"), synth::default_user_profile(), 1));
  for (auto _ : state) benchmark::DoNotOptimize(extract_features(processed));
}
BENCHMARK(BM_ExtractFeatures);

void BM_Enroll(benchmark::State& state) {
  const auto& shape = synth::find_shape(state.range(0) ? "Bar" : "L");
  std::vector<GestureTrace> rounds;
  for (int r = 1; r <= 10; ++r) rounds.push_back(synth::gen_trace(shape, synth::default_user_profile(), r));
  const auto config = default_config();
  for (auto _ : state) benchmark::DoNotOptimize(enroll("bench", rounds[0].meta, rounds, config));
}
BENCHMARK(BM_Enroll)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_VerifyAttempt(benchmark::State& state) {
  const auto& shape = synth::find_shape(state.range(0) ? "Bar" : "L");
  std::vector<GestureTrace> rounds;
  for (int r = 1; r <= 10; ++r) rounds.push_back(synth::gen_trace(shape, synth::default_user_profile(), r));
  const auto record = enroll("bench", rounds[0].meta, rounds, default_config());
  const auto probe = synth::gen_trace(shape, synth::default_user_profile(), 11);
  for (auto _ : state) benchmark::DoNotOptimize(verify_attempt(probe, record));
}
BENCHMARK(BM_VerifyAttempt)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
