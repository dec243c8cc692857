#include <benchmark/benchmark.h>

#include "polarrl/sim.hpp"

using namespace polarrl;

namespace {

const PolarCode& code128() {
  static const PolarCode code = build_nr_code(7, 64);
  return code;
}

void BM_Encode(benchmark::State& state) {
  auto const& code = code128();
  Rng rng(1);
  BitVec payload(static_cast<std::size_t>(code.payload_length()));
  for (auto& b : payload) b = static_cast<Bit>(rng() & 1U);
  auto const u = embed_info_word(crc_attach(payload, code), code);
  for (auto _ : state) {
    auto x = encode(u, code);
    benchmark::DoNotOptimize(x.data());
  }
}
BENCHMARK(BM_Encode);

void BM_BpIterate(benchmark::State& state) {
  auto const& code = code128();
  FrameSource source(code, ebn0_to_sigma2(3.0, 0.5), 2, 0);
  auto const frame = source.make(0);
  std::vector<llr_t> channel(frame.llr.begin(), frame.llr.end());
  MessageMemory mem(7);
  BpConfig const cfg;
  mem.reset(channel, code.frozen_mask(), cfg.sat);
  for (auto _ : state) {
    bp_iterate(mem, cfg);
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_BpIterate);

// Arg 0: noiseless (stops at i_min); arg 1: 2 dB, mixed.
void BM_CabpDecode(benchmark::State& state) {
  auto const& code = code128();
  double const sigma2 = state.range(0) == 0 ? 1e-3 : ebn0_to_sigma2(2.0, 0.5);
  FrameSource source(code, sigma2, 3, 0);
  std::vector<std::vector<double>> frames;
  for (std::uint64_t i = 0; i < 64; ++i) frames.push_back(source.make(i).llr);
  CabpDecoder dec(code, BpConfig{});
  auto const id = StagePermutation::identity(7);
  std::size_t i = 0;
  for (auto _ : state) {
    auto out = dec.decode(frames[i++ % frames.size()], id);
    benchmark::DoNotOptimize(out.crc_ok);
  }
}
BENCHMARK(BM_CabpDecode)->Arg(0)->Arg(1);

void BM_BanditSelect(benchmark::State& state) {
  BanditParams params;
  params.algo = static_cast<BanditAlgo>(state.range(0));
  int const k = 500;
  BanditState bandit(params, k);
  Rng rng(4);
  for (int t = 0; t < 5000; ++t) bandit.update(bandit.select(rng), static_cast<int>(rng() & 1U));
  for (auto _ : state) benchmark::DoNotOptimize(bandit.select(rng));
  state.SetLabel(std::string(to_string(params.algo)));
}
BENCHMARK(BM_BanditSelect)->Arg(0)->Arg(1)->Arg(2);

}  // namespace

BENCHMARK_MAIN();
