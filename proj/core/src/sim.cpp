#include "polarrl/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

#include <boost/math/special_functions/beta.hpp>

namespace polarrl {

namespace {

// Point index reserved for the pre-training frames so they never collide
// with a measured point.
constexpr std::uint64_t kPretrainPoint = 0xFFFF'FFFFULL;
constexpr std::size_t kBatch = 512;

template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i, 0U);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  unsigned const workers = std::min<unsigned>(threads, static_cast<unsigned>(count));
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = next++; i < count; i = next++) fn(i, w);
    });
  }
  for (auto& t : pool) t.join();
}

bool info_matches(const DecodeOutcome& out, const BitVec& info_word, const PolarCode& code) {
  auto const& info = code.info_set();
  for (std::size_t k = 0; k < info.size(); ++k) {
    if (out.u_hat[info[k]] != info_word[k]) return false;
  }
  return true;
}

void tally(PointResult& point, const DecodeOutcome& out, const BitVec& info_word, const PolarCode& code,
           int attempts, int iterations) {
  bool const correct = info_matches(out, info_word, code);
  ++point.frames;
  if (!out.crc_ok || !correct) ++point.frame_errors;
  if (out.crc_ok && !correct) ++point.undetected_errors;
  point.total_attempts += static_cast<std::uint64_t>(attempts);
  point.total_iterations += static_cast<std::uint64_t>(iterations);
}

unsigned worker_count(const CampaignConfig& cfg) {
  if (cfg.threads > 0) return cfg.threads;
  return std::max(1U, std::thread::hardware_concurrency());
}

}  // namespace

std::string_view to_string(LearnerMode mode) { return mode == LearnerMode::continual ? "continual" : "frozen"; }

LearnerMode parse_learner_mode(std::string_view text) {
  if (text == "continual" || text == "continue") return LearnerMode::continual;
  if (text == "frozen") return LearnerMode::frozen;
  throw std::invalid_argument("unknown learner mode '" + std::string(text) + "'");
}

void CampaignConfig::validate() const {
  if (ebn0_grid.empty()) throw std::invalid_argument("Eb/N0 grid is empty");
  if (max_frames < 1) throw std::invalid_argument("max_frames must be >= 1");
  if (min_frame_errors < 1) throw std::invalid_argument("min_frame_errors must be >= 1");
  if (M < 1) throw std::invalid_argument("M must be >= 1");
  effective_bp().validate();
  bandit.validate();
  if (scheme == Scheme::rl_cabp) {
    if (M < 2) throw std::invalid_argument("RL-CABP needs M >= 2");
    if (k < 1) throw std::invalid_argument("RL-CABP needs k >= 1");
  }
  (void)CrcPolynomial::parse(crc);
}

BpConfig CampaignConfig::effective_bp() const {
  if (scheme != Scheme::bp) return bp;
  BpConfig plain = bp;
  plain.crc_aid = false;
  plain.early_term = false;
  return plain;
}

PolarCode CampaignConfig::make_code() const {
  auto const poly = CrcPolynomial::parse(crc);
  if (!frozen_file.empty()) {
    auto const frozen = read_index_file(frozen_file);
    PolarCode code = PolarCode::from_frozen_set(n, frozen, poly);
    if (code.info_length() != K) {
      throw std::invalid_argument("frozen file yields K=" + std::to_string(code.info_length()) +
                                  ", config says K=" + std::to_string(K));
    }
    return code;
  }
  if (!reliability_file.empty()) {
    auto const order = read_index_file(reliability_file);
    return PolarCode::from_reliability(n, K, order, poly);
  }
  return PolarCode::from_reliability(n, K, nr_reliability_sequence(), poly);
}

nlohmann::json CampaignConfig::to_json() const {
  return {
      {"n", n},
      {"K", K},
      {"crc", crc},
      {"reliability_file", reliability_file},
      {"frozen_file", frozen_file},
      {"decoder", to_string(scheme)},
      {"i_max", bp.i_max},
      {"i_min", bp.i_min},
      {"alpha", bp.alpha},
      {"sat", bp.sat},
      {"crc_aid", bp.crc_aid},
      {"early_term", bp.early_term},
      {"algo", to_string(bandit.algo)},
      {"epsilon", bandit.epsilon},
      {"c", bandit.c},
      {"ts_update", to_string(bandit.ts_rule)},
      {"k", k},
      {"M", M},
      {"learner", to_string(learner)},
      {"reset_per_point", reset_per_point},
      {"pretrain_steps", pretrain_steps},
      {"pretrain_ebn0_db", pretrain_ebn0_db},
      {"ebn0_grid", ebn0_grid},
      {"rate_convention", to_string(rate)},
      {"max_frames", max_frames},
      {"min_frame_errors", min_frame_errors},
      {"time_step_budget", time_step_budget},
      {"base_seed", base_seed},
  };
}

CampaignConfig CampaignConfig::from_json(const nlohmann::json& j) {
  CampaignConfig c;
  c.n = j.at("n").get<int>();
  c.K = j.at("K").get<int>();
  c.crc = j.at("crc").get<std::string>();
  c.reliability_file = j.at("reliability_file").get<std::string>();
  c.frozen_file = j.at("frozen_file").get<std::string>();
  c.scheme = parse_scheme(j.at("decoder").get<std::string>());
  c.bp.i_max = j.at("i_max").get<int>();
  c.bp.i_min = j.at("i_min").get<int>();
  c.bp.alpha = j.at("alpha").get<float>();
  c.bp.sat = j.at("sat").get<float>();
  c.bp.crc_aid = j.at("crc_aid").get<bool>();
  c.bp.early_term = j.at("early_term").get<bool>();
  c.bandit.algo = parse_bandit_algo(j.at("algo").get<std::string>());
  c.bandit.epsilon = j.at("epsilon").get<double>();
  c.bandit.c = j.at("c").get<double>();
  c.bandit.ts_rule = parse_ts_update_rule(j.at("ts_update").get<std::string>());
  c.k = j.at("k").get<int>();
  c.M = j.at("M").get<int>();
  c.learner = parse_learner_mode(j.at("learner").get<std::string>());
  c.reset_per_point = j.at("reset_per_point").get<bool>();
  c.pretrain_steps = j.at("pretrain_steps").get<std::uint64_t>();
  c.pretrain_ebn0_db = j.at("pretrain_ebn0_db").get<double>();
  c.ebn0_grid = j.at("ebn0_grid").get<std::vector<double>>();
  c.rate = parse_rate_convention(j.at("rate_convention").get<std::string>());
  c.max_frames = j.at("max_frames").get<std::uint64_t>();
  c.min_frame_errors = j.at("min_frame_errors").get<std::uint64_t>();
  c.time_step_budget = j.at("time_step_budget").get<std::uint64_t>();
  c.base_seed = j.at("base_seed").get<std::uint64_t>();
  return c;
}

std::pair<double, double> binomial_interval(std::uint64_t successes, std::uint64_t trials, double confidence) {
  if (trials == 0) return {0.0, 1.0};
  if (successes > trials) throw std::invalid_argument("successes exceed trials");
  double const a = 1.0 - confidence;
  auto const k = static_cast<double>(successes);
  auto const n = static_cast<double>(trials);
  double const lo = successes == 0 ? 0.0 : boost::math::ibeta_inv(k, n - k + 1.0, a / 2.0);
  double const hi = successes == trials ? 1.0 : boost::math::ibeta_inv(k + 1.0, n - k, 1.0 - a / 2.0);
  return {lo, hi};
}

double PointResult::mean_iterations() const {
  return frames ? static_cast<double>(total_iterations) / static_cast<double>(frames) : 0.0;
}

double PointResult::mean_attempts() const {
  return frames ? static_cast<double>(total_attempts) / static_cast<double>(frames) : 0.0;
}

FrameSource::FrameSource(const PolarCode& code, double sigma2, std::uint64_t seed, std::uint64_t point)
    : code_(&code), sigma2_(sigma2), seed_(seed), point_(point) {}

FrameSource::Frame FrameSource::make(std::uint64_t index) const {
  Rng payload_rng = make_rng(seed_, Stream::payload, point_, index);
  BitVec payload(static_cast<std::size_t>(code_->payload_length()));
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < payload.size(); ++i) {
    if (i % 64 == 0) word = payload_rng();
    payload[i] = static_cast<Bit>((word >> (i % 64)) & 1U);
  }
  Frame frame;
  frame.info_word = crc_attach(payload, *code_);
  BitVec const x = encode(embed_info_word(frame.info_word, *code_), *code_);
  Rng noise_rng = make_rng(seed_, Stream::noise, point_, index);
  frame.llr = transmit(x, sigma2_, noise_rng);
  return frame;
}

Rng FrameSource::scheme_rng(std::uint64_t index) const { return make_rng(seed_, Stream::scheme, point_, index); }

std::vector<Action> campaign_action_set(const CampaignConfig& cfg) {
  Rng rng = make_rng(cfg.base_seed, Stream::actions, 0);
  return build_action_set(cfg.n, cfg.k, cfg.M, rng);
}

namespace {

struct PendingFrame {
  FrameSource::Frame frame;
  DecodeOutcome outcome;
  int attempts = 1;
  int iterations = 0;
};

// Runs one Eb/N0 point. `rl` is null for the baseline schemes.
PointResult run_point(const CampaignConfig& cfg, const PolarCode& code, double ebn0_db, std::uint64_t point_index,
                      RlCabpDecoder* rl, std::vector<int>* trace) {
  BpConfig const bp = cfg.effective_bp();
  double const sigma2 = ebn0_to_sigma2(ebn0_db, rate_of(code, cfg.rate));
  FrameSource source(code, sigma2, cfg.base_seed, point_index);
  unsigned const workers = worker_count(cfg);

  std::vector<CabpDecoder> natural;
  std::vector<BaselineDecoder> baseline;
  for (unsigned w = 0; w < workers; ++w) {
    if (rl) {
      natural.emplace_back(code, bp);
    } else {
      baseline.emplace_back(code, bp, cfg.scheme, cfg.M);
    }
  }
  PermutationPlan const identity = PermutationPlan::make(StagePermutation::identity(code.stages()), code);

  PointResult point;
  point.ebn0_db = ebn0_db;
  point.sigma2 = sigma2;
  std::vector<PendingFrame> batch;
  while (point.frames < cfg.max_frames && point.frame_errors < cfg.min_frame_errors) {
    std::uint64_t const first = point.frames;
    std::size_t const size = static_cast<std::size_t>(std::min<std::uint64_t>(kBatch, cfg.max_frames - first));
    batch.assign(size, PendingFrame{});
    parallel_for(size, workers, [&](std::size_t i, unsigned w) {
      PendingFrame& p = batch[i];
      p.frame = source.make(first + i);
      if (rl) {
        p.outcome = natural[w].decode(p.frame.llr, identity);
        p.iterations = p.outcome.iterations_used;
      } else {
        Rng rng = source.scheme_rng(first + i);
        BaselineRecord rec = baseline[w].decode(p.frame.llr, rng);
        p.outcome = std::move(rec.outcome);
        p.attempts = rec.attempts;
        p.iterations = rec.total_iterations;
      }
    });
    // Learner updates and the stop rule run in frame order.
    for (PendingFrame& p : batch) {
      if (rl && !p.outcome.crc_ok) {
        RlDecodeRecord rec = rl->decode_with_bandit(p.frame.llr, std::move(p.outcome));
        p.outcome = std::move(rec.outcome);
        p.attempts = rec.attempts;
        p.iterations = rec.total_iterations;
        ++point.bandit_invocations;
        point.bandit_rewards += static_cast<std::uint64_t>(*rec.reward);
        if (trace) trace->push_back(*rec.reward);
      }
      tally(point, p.outcome, p.frame.info_word, code, p.attempts, p.iterations);
      if (point.frame_errors >= cfg.min_frame_errors) break;
    }
  }
  return point;
}

}  // namespace

CampaignResult run_fer_campaign(const CampaignConfig& cfg) {
  cfg.validate();
  PolarCode const code = cfg.make_code();
  CampaignResult result;
  result.version = library_version();
  result.config = cfg;

  std::optional<RlCabpDecoder> rl;
  std::optional<BanditState> initial;
  if (cfg.scheme == Scheme::rl_cabp) {
    rl.emplace(code, cfg.effective_bp(), campaign_action_set(cfg), BanditState(cfg.bandit, cfg.k),
               derive_seed(cfg.base_seed, Stream::bandit, 0));
    if (cfg.pretrain_steps > 0) {
      double const sigma2 = ebn0_to_sigma2(cfg.pretrain_ebn0_db, rate_of(code, cfg.rate));
      FrameSource source(code, sigma2, cfg.base_seed, kPretrainPoint);
      std::uint64_t index = 0;
      while (rl->state().t() < cfg.pretrain_steps) {
        if (index >= cfg.max_frames) throw std::runtime_error("pre-training budget unreachable within max_frames");
        auto const frame = source.make(index++);
        (void)rl->decode(frame.llr);
      }
    }
    rl->set_learning(cfg.learner == LearnerMode::continual);
    initial = rl->state();
  }

  for (std::size_t p = 0; p < cfg.ebn0_grid.size(); ++p) {
    if (rl && cfg.reset_per_point) rl->reset_state(*initial);
    result.points.push_back(run_point(cfg, code, cfg.ebn0_grid[p], p, rl ? &*rl : nullptr,
                                      rl ? &result.reward_trace : nullptr));
  }
  if (rl) result.final_bandit_state = rl->state().to_json();
  return result;
}

FailureSet collect_failures(const CampaignConfig& cfg, const PolarCode& code, std::uint64_t budget) {
  FailureSet set;
  if (budget == 0) return set;
  double const sigma2 = ebn0_to_sigma2(cfg.ebn0_grid.front(), rate_of(code, cfg.rate));
  FrameSource source(code, sigma2, cfg.base_seed, 0);
  unsigned const workers = worker_count(cfg);
  std::vector<CabpDecoder> decoders;
  for (unsigned w = 0; w < workers; ++w) decoders.emplace_back(code, cfg.bp);
  PermutationPlan const identity = PermutationPlan::make(StagePermutation::identity(code.stages()), code);

  std::vector<PendingFrame> batch;
  while (set.llr.size() < budget) {
    if (set.frames_scanned >= cfg.max_frames) {
      throw std::runtime_error("time-step budget unreachable within max_frames (" +
                               std::to_string(set.llr.size()) + " of " + std::to_string(budget) + " failures)");
    }
    std::uint64_t const first = set.frames_scanned;
    std::size_t const size = static_cast<std::size_t>(std::min<std::uint64_t>(kBatch, cfg.max_frames - first));
    batch.assign(size, PendingFrame{});
    parallel_for(size, workers, [&](std::size_t i, unsigned w) {
      batch[i].frame = source.make(first + i);
      batch[i].outcome = decoders[w].decode(batch[i].frame.llr, identity);
    });
    for (PendingFrame& p : batch) {
      ++set.frames_scanned;
      if (!p.outcome.crc_ok) {
        set.llr.push_back(std::move(p.frame.llr));
        set.natural.push_back(std::move(p.outcome));
        if (set.llr.size() == budget) break;
      }
    }
  }
  return set;
}

namespace {

StudyRow replay(const CampaignConfig& cfg, const PolarCode& code, const FailureSet& failures,
                std::vector<Action> actions, const BanditParams& params, int k) {
  RlCabpDecoder rl(code, cfg.bp, std::move(actions), BanditState(params, k),
                   derive_seed(cfg.base_seed, Stream::bandit, 0));
  StudyRow row;
  row.trace.reserve(failures.llr.size());
  for (std::size_t i = 0; i < failures.llr.size(); ++i) {
    RlDecodeRecord const rec = rl.decode_with_bandit(failures.llr[i], failures.natural[i]);
    row.trace.push_back(*rec.reward);
    row.cumulative_reward += static_cast<std::uint64_t>(*rec.reward);
  }
  row.time_steps = row.trace.size();
  row.mean_reward = row.time_steps ? static_cast<double>(row.cumulative_reward) / static_cast<double>(row.time_steps)
                                   : 0.0;
  return row;
}

}  // namespace

std::vector<StudyRow> run_reward_study(const CampaignConfig& cfg, std::string_view param,
                                       std::span<const double> grid) {
  cfg.validate();
  if (param != "epsilon" && param != "c") {
    throw std::invalid_argument("reward study parameter must be 'epsilon' or 'c'");
  }
  PolarCode const code = cfg.make_code();
  return run_reward_study(cfg, collect_failures(cfg, code, cfg.time_step_budget), param, grid);
}

std::vector<StudyRow> run_reward_study(const CampaignConfig& cfg, const FailureSet& failures, std::string_view param,
                                       std::span<const double> grid) {
  cfg.validate();
  if (param != "epsilon" && param != "c") {
    throw std::invalid_argument("reward study parameter must be 'epsilon' or 'c'");
  }
  PolarCode const code = cfg.make_code();
  auto const actions = campaign_action_set(cfg);
  std::vector<StudyRow> rows;
  for (double value : grid) {
    BanditParams params = cfg.bandit;
    if (param == "epsilon") {
      params.algo = BanditAlgo::eps_greedy;
      params.epsilon = value;
    } else {
      params.algo = BanditAlgo::ucb;
      params.c = value;
    }
    StudyRow row = replay(cfg, code, failures, actions, params, cfg.k);
    row.param = std::string(param);
    row.value = value;
    row.label = std::string(to_string(params.algo));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<StudyRow> run_algo_study(const CampaignConfig& cfg, std::span<const BanditAlgo> algos) {
  cfg.validate();
  PolarCode const code = cfg.make_code();
  return run_algo_study(cfg, collect_failures(cfg, code, cfg.time_step_budget), algos);
}

std::vector<StudyRow> run_algo_study(const CampaignConfig& cfg, const FailureSet& failures,
                                     std::span<const BanditAlgo> algos) {
  cfg.validate();
  PolarCode const code = cfg.make_code();
  auto const actions = campaign_action_set(cfg);
  std::vector<StudyRow> rows;
  for (std::size_t i = 0; i < algos.size(); ++i) {
    BanditParams params = cfg.bandit;
    params.algo = algos[i];
    StudyRow row = replay(cfg, code, failures, actions, params, cfg.k);
    row.param = "algo";
    row.value = static_cast<double>(i);
    row.label = std::string(to_string(algos[i]));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<StudyRow> run_k_study(const CampaignConfig& cfg, std::span<const int> k_grid) {
  cfg.validate();
  PolarCode const code = cfg.make_code();
  return run_k_study(cfg, collect_failures(cfg, code, cfg.time_step_budget), k_grid);
}

std::vector<StudyRow> run_k_study(const CampaignConfig& cfg, const FailureSet& failures, std::span<const int> k_grid) {
  cfg.validate();
  PolarCode const code = cfg.make_code();
  std::vector<StudyRow> rows;
  for (int k : k_grid) {
    CampaignConfig sized = cfg;
    sized.k = k;
    StudyRow row = replay(cfg, code, failures, campaign_action_set(sized), cfg.bandit, k);
    row.param = "k";
    row.value = k;
    row.label = std::string(to_string(cfg.bandit.algo));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace polarrl
