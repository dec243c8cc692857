#include <doctest.h>

#include <boost/random/normal_distribution.hpp>

#include "polarrl/rl_decoder.hpp"
#include "polarrl/sim.hpp"

using namespace polarrl;

namespace {

struct Fixture {
  PolarCode code = build_nr_code(7, 64);
  BpConfig cfg;
  int M = 7;
  int k = 20;

  RlCabpDecoder make_rl(std::uint64_t seed = 5, BanditAlgo algo = BanditAlgo::eps_greedy) const {
    Rng rng(seed);
    BanditParams params;
    params.algo = algo;
    return RlCabpDecoder(code, cfg, build_action_set(7, k, M, rng), BanditState(params, k), seed + 1);
  }

  std::vector<double> noiseless(std::uint64_t seed) const {
    FrameSource source(code, 1e-9, seed, 0);
    return source.make(0).llr;
  }
};

// Frames at 3 dB whose natural-graph decode fails.
std::vector<FrameSource::Frame> natural_failures(const PolarCode& code, std::size_t count) {
  FrameSource source(code, ebn0_to_sigma2(3.0, 0.5), 99, 0);
  CabpDecoder dec(code, BpConfig{});
  auto const id = StagePermutation::identity(7);
  std::vector<FrameSource::Frame> out;
  for (std::uint64_t i = 0; out.size() < count; ++i) {
    auto frame = source.make(i);
    if (!dec.decode(frame.llr, id).crc_ok) out.push_back(std::move(frame));
  }
  return out;
}

}  // namespace

TEST_CASE("scheme names") {
  CHECK(parse_scheme("cabp") == Scheme::cabp);
  CHECK(parse_scheme("cp-cabp") == Scheme::cp_cabp);
  CHECK(parse_scheme("rp-cabp") == Scheme::rp_cabp);
  CHECK(parse_scheme("rl-cabp") == Scheme::rl_cabp);
  CHECK(to_string(Scheme::rp_cabp) == "rp-cabp");
  CHECK_THROWS(parse_scheme("scl"));
}

TEST_CASE("a noiseless frame never reaches the bandit") {
  Fixture const f;
  auto rl = f.make_rl();
  auto const before = rl.state();
  auto const rec = rl.decode(f.noiseless(1));
  CHECK(rec.outcome.crc_ok);
  CHECK_FALSE(rec.used_bandit);
  CHECK(rec.attempts == 1);
  CHECK_FALSE(rec.action_id.has_value());
  CHECK_FALSE(rec.reward.has_value());
  CHECK(rl.state() == before);
  CHECK(rec.time_step_after == 0);
}

TEST_CASE("an erasure passes the CRC on the natural graph") {
  // The all-zero word satisfies every CRC, so a frame with no channel
  // information ends on the first attempt without consulting the bandit.
  Fixture const f;
  auto rl = f.make_rl();
  auto const rec = rl.decode(std::vector<double>(128, 0.0));
  CHECK(rec.outcome.crc_ok);
  CHECK_FALSE(rec.used_bandit);
  CHECK(rec.outcome.u_hat == BitVec(128, 0));
}

TEST_CASE("a pure-noise frame exhausts the action") {
  Fixture const f;
  auto rl = f.make_rl();
  Rng rng(17);
  boost::random::normal_distribution<double> noise(0.0, 4.0);
  std::vector<double> llr(128);
  for (auto& v : llr) v = noise(rng);
  auto const rec = rl.decode(llr);
  CHECK(rec.used_bandit);
  CHECK_FALSE(rec.outcome.crc_ok);
  CHECK(rec.reward == 0);
  CHECK(rec.attempts == f.M);
  CHECK(rec.time_step_after == 1);
  CHECK(rl.state().arm(*rec.action_id - 1).pulls == 1);
  CHECK(rl.state().arm(*rec.action_id - 1).q == 0.0);
}

TEST_CASE("rescued frames earn a reward") {
  Fixture const f;
  auto const frames = natural_failures(f.code, 40);
  auto rl = f.make_rl();
  int rescued = 0;
  std::uint64_t failures = 0;
  for (auto const& frame : frames) {
    auto const rec = rl.decode(frame.llr);
    REQUIRE(rec.used_bandit);
    ++failures;
    CHECK(rec.action_id.has_value());
    CHECK(rec.attempts >= 2);
    CHECK(rec.attempts <= f.M);
    CHECK(*rec.reward == (rec.outcome.crc_ok ? 1 : 0));
    CHECK(rec.time_step_after == failures);
    if (*rec.reward == 1) {
      ++rescued;
      CHECK(rec.outcome.permutation_id.has_value());
    }
  }
  CHECK(rescued > 0);
  CHECK(rl.state().t() == failures);
}

TEST_CASE("eager and lazy selection agree") {
  Fixture const f;
  auto lazy = f.make_rl(8, BanditAlgo::ts);
  auto eager = f.make_rl(8, BanditAlgo::ts);
  FrameSource source(f.code, ebn0_to_sigma2(2.5, 0.5), 3, 0);
  for (std::uint64_t i = 0; i < 400; ++i) {
    auto const frame = source.make(i);
    auto const a = lazy.decode(frame.llr, false);
    auto const b = eager.decode(frame.llr, true);
    CHECK(a.used_bandit == b.used_bandit);
    CHECK(a.action_id == b.action_id);
    CHECK(a.reward == b.reward);
    CHECK(a.attempts == b.attempts);
    CHECK(a.outcome.u_hat == b.outcome.u_hat);
  }
  CHECK(lazy.state() == eager.state());
  CHECK(lazy.state().t() > 0);
}

TEST_CASE("RL-CABP succeeds wherever CABP does") {
  Fixture const f;
  auto rl = f.make_rl(9);
  CabpDecoder cabp(f.code, f.cfg);
  auto const id = StagePermutation::identity(7);
  FrameSource source(f.code, ebn0_to_sigma2(2.5, 0.5), 4, 0);
  std::uint64_t natural_failures_seen = 0;
  for (std::uint64_t i = 0; i < 400; ++i) {
    auto const frame = source.make(i);
    auto const base = cabp.decode(frame.llr, id);
    auto const rec = rl.decode(frame.llr);
    natural_failures_seen += !base.crc_ok;
    if (base.crc_ok) {
      CHECK(rec.outcome.u_hat == base.u_hat);
      CHECK_FALSE(rec.used_bandit);
    }
  }
  CHECK(rl.state().t() == natural_failures_seen);
}

TEST_CASE("frozen learner leaves the state alone") {
  Fixture const f;
  auto const frames = natural_failures(f.code, 5);
  auto rl = f.make_rl();
  rl.set_learning(false);
  auto const before = rl.state();
  for (auto const& frame : frames) CHECK(rl.decode(frame.llr).used_bandit);
  CHECK(rl.state() == before);
  CHECK(rl.invocations() == 5);
}

TEST_CASE("mismatched construction is rejected") {
  Fixture const f;
  Rng rng(1);
  auto actions = build_action_set(7, 5, 7, rng);
  CHECK_THROWS(RlCabpDecoder(f.code, f.cfg, actions, BanditState(BanditParams{}, 4), 1));
  actions[0].perms[0] = StagePermutation::identity(7);
  CHECK_THROWS(RlCabpDecoder(f.code, f.cfg, actions, BanditState(BanditParams{}, 5), 1));
  CHECK_THROWS(BaselineDecoder(f.code, f.cfg, Scheme::rl_cabp, 7));
}

TEST_CASE("baselines") {
  Fixture const f;
  Rng rng(3);

  SUBCASE("noiseless frames need one attempt") {
    for (Scheme s : {Scheme::cabp, Scheme::cp_cabp, Scheme::rp_cabp}) {
      BaselineDecoder dec(f.code, f.cfg, s, f.M);
      auto const rec = dec.decode(f.noiseless(2), rng);
      CHECK(rec.outcome.crc_ok);
      CHECK(rec.attempts == 1);
    }
  }

  SUBCASE("attempt bounds on hard frames") {
    auto const frames = natural_failures(f.code, 20);
    BaselineDecoder cp(f.code, f.cfg, Scheme::cp_cabp, f.M);
    BaselineDecoder rp(f.code, f.cfg, Scheme::rp_cabp, f.M);
    BaselineDecoder cabp(f.code, f.cfg, Scheme::cabp, f.M);
    for (auto const& frame : frames) {
      auto const c = cp.decode(frame.llr, rng);
      auto const r = rp.decode(frame.llr, rng);
      CHECK(c.attempts >= 2);
      CHECK(c.attempts <= 7);
      CHECK(r.attempts >= 2);
      CHECK(r.attempts <= 7);
      CHECK((c.attempts == 7 || c.outcome.crc_ok));
      CHECK((r.attempts == 7 || r.outcome.crc_ok));
      CHECK(cabp.decode(frame.llr, rng).attempts == 1);
    }
  }

  SUBCASE("RP-CABP is reproducible for a fixed seed") {
    auto const frames = natural_failures(f.code, 10);
    BaselineDecoder rp(f.code, f.cfg, Scheme::rp_cabp, f.M);
    for (auto const& frame : frames) {
      Rng a(123);
      Rng b(123);
      auto const x = rp.decode(frame.llr, a);
      auto const y = rp.decode(frame.llr, b);
      CHECK(x.attempts == y.attempts);
      CHECK(x.outcome.u_hat == y.outcome.u_hat);
      CHECK(x.outcome.permutation_id == y.outcome.permutation_id);
      CHECK(baseline_decode(frame.llr, Scheme::rp_cabp, f.code, f.cfg, f.M, a).u_hat ==
            baseline_decode(frame.llr, Scheme::rp_cabp, f.code, f.cfg, f.M, b).u_hat);
    }
  }

  SUBCASE("plain BP runs every iteration") {
    BaselineDecoder bp(f.code, BpConfig::plain_bp(30), Scheme::bp, f.M);
    auto const rec = bp.decode(f.noiseless(4), rng);
    CHECK(rec.outcome.iterations_used == 30);
    CHECK(rec.outcome.crc_ok);
  }
}
