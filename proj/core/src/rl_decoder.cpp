#include "polarrl/rl_decoder.hpp"

#include <stdexcept>
#include <string>

namespace polarrl {

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::cabp: return "cabp";
    case Scheme::cp_cabp: return "cp-cabp";
    case Scheme::rp_cabp: return "rp-cabp";
    case Scheme::rl_cabp: return "rl-cabp";
    case Scheme::bp: return "bp";
  }
  return "?";
}

Scheme parse_scheme(std::string_view text) {
  if (text == "cabp") return Scheme::cabp;
  if (text == "cp-cabp") return Scheme::cp_cabp;
  if (text == "rp-cabp") return Scheme::rp_cabp;
  if (text == "rl-cabp") return Scheme::rl_cabp;
  if (text == "bp") return Scheme::bp;
  throw std::invalid_argument("unknown decoder '" + std::string(text) + "'");
}

RlCabpDecoder::RlCabpDecoder(const PolarCode& code, const BpConfig& cfg, std::vector<Action> actions,
                             BanditState state, std::uint64_t bandit_seed)
    : decoder_(code, cfg),
      actions_(std::move(actions)),
      natural_(PermutationPlan::make(StagePermutation::identity(code.stages()), code)),
      state_(std::move(state)),
      bandit_seed_(bandit_seed) {
  if (actions_.empty()) throw std::invalid_argument("RL-CABP needs at least one action");
  if (static_cast<int>(actions_.size()) != state_.arms()) {
    throw std::invalid_argument("bandit arm count does not match the action set");
  }
  plans_.reserve(actions_.size());
  for (auto const& action : actions_) {
    std::vector<PermutationPlan> plans;
    for (auto const& perm : action.perms) {
      if (perm.is_identity()) throw std::invalid_argument("actions must not contain the identity permutation");
      plans.push_back(PermutationPlan::make(perm, code));
    }
    plans_.push_back(std::move(plans));
  }
}

int RlCabpDecoder::select_for(std::uint64_t invocation) const {
  Rng rng = make_rng(bandit_seed_, Stream::bandit, invocation);
  return state_.select(rng);
}

DecodeOutcome RlCabpDecoder::decode_natural(std::span<const double> llr) { return decoder_.decode(llr, natural_); }

BaselineRecord RlCabpDecoder::try_action(std::span<const double> llr, int action_index) {
  BaselineRecord rec;
  rec.attempts = 0;
  for (auto const& plan : plans_.at(static_cast<std::size_t>(action_index))) {
    rec.outcome = decoder_.decode(llr, plan);
    ++rec.attempts;
    rec.total_iterations += rec.outcome.iterations_used;
    if (rec.outcome.crc_ok) break;
  }
  return rec;
}

RlDecodeRecord RlCabpDecoder::finish(std::span<const double> llr, DecodeOutcome natural, int arm) {
  RlDecodeRecord rec;
  rec.total_iterations = natural.iterations_used;
  if (natural.crc_ok) {
    rec.outcome = std::move(natural);
    rec.time_step_after = state_.t();
    return rec;
  }
  ++invocations_;
  BaselineRecord tried = try_action(llr, arm);
  rec.used_bandit = true;
  rec.action_id = actions_[static_cast<std::size_t>(arm)].id;
  rec.reward = tried.outcome.crc_ok ? 1 : 0;
  rec.attempts = 1 + tried.attempts;
  rec.total_iterations += tried.total_iterations;
  rec.outcome = std::move(tried.outcome);
  if (learning_) state_.update(arm, *rec.reward);
  rec.time_step_after = state_.t();
  return rec;
}

RlDecodeRecord RlCabpDecoder::decode_with_bandit(std::span<const double> llr, DecodeOutcome natural) {
  int const arm = natural.crc_ok ? -1 : select_for(invocations_);
  return finish(llr, std::move(natural), arm);
}

RlDecodeRecord RlCabpDecoder::decode(std::span<const double> llr, bool eager_selection) {
  if (eager_selection) {
    int const arm = select_for(invocations_);
    return finish(llr, decode_natural(llr), arm);
  }
  return decode_with_bandit(llr, decode_natural(llr));
}

BaselineDecoder::BaselineDecoder(const PolarCode& code, const BpConfig& cfg, Scheme scheme, int M)
    : decoder_(code, cfg),
      scheme_(scheme),
      M_(M),
      natural_(PermutationPlan::make(StagePermutation::identity(code.stages()), code)) {
  if (scheme == Scheme::rl_cabp) throw std::invalid_argument("rl-cabp is not a baseline scheme");
  if (M < 1) throw std::invalid_argument("M must be >= 1");
  if (scheme == Scheme::cp_cabp) {
    for (auto const& perm : cyclic_shift_set(code.stages())) cyclic_.push_back(PermutationPlan::make(perm, code));
  }
}

BaselineRecord BaselineDecoder::decode(std::span<const double> llr, Rng& rng) {
  BaselineRecord rec;
  auto attempt = [&](const PermutationPlan& plan) {
    rec.outcome = decoder_.decode(llr, plan);
    rec.total_iterations += rec.outcome.iterations_used;
    return rec.outcome.crc_ok;
  };
  rec.attempts = 1;
  switch (scheme_) {
    case Scheme::cabp:
    case Scheme::bp:
      attempt(natural_);
      break;
    case Scheme::cp_cabp:
      rec.attempts = 0;
      for (auto const& plan : cyclic_) {
        ++rec.attempts;
        if (attempt(plan)) break;
      }
      break;
    case Scheme::rp_cabp: {
      if (attempt(natural_)) break;
      int const n = decoder_.code().stages();
      for (int t = 1; t < M_; ++t) {
        auto const perm = random_stage_permutation(n, rng, true).with_id(t);
        ++rec.attempts;
        if (attempt(PermutationPlan::make(perm, decoder_.code()))) break;
      }
      break;
    }
    case Scheme::rl_cabp:
      break;
  }
  return rec;
}

DecodeOutcome baseline_decode(std::span<const double> llr, Scheme scheme, const PolarCode& code,
                              const BpConfig& cfg, int M, Rng& rng) {
  BaselineDecoder decoder(code, cfg, scheme, M);
  return decoder.decode(llr, rng).outcome;
}

}  // namespace polarrl
