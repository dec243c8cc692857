#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "polarrl/bandit.hpp"
#include "polarrl/bp_decoder.hpp"

namespace polarrl {

enum class Scheme { cabp, cp_cabp, rp_cabp, rl_cabp, bp };

std::string_view to_string(Scheme scheme);
Scheme parse_scheme(std::string_view text);

struct RlDecodeRecord {
  DecodeOutcome outcome;
  bool used_bandit = false;
  std::optional<int> action_id;  // 1-based Action::id
  std::optional<int> reward;
  int attempts = 1;
  int total_iterations = 0;
  std::uint64_t time_step_after = 0;
};

/// Frame-level result of the non-learning schemes.
struct BaselineRecord {
  DecodeOutcome outcome;
  int attempts = 1;
  int total_iterations = 0;
};

/// RL-aided CABP: decode on the natural graph first; if the CRC fails, ask
/// the bandit for an action and try its permutations in order until one
/// passes the CRC. The reward is 1 iff some permutation passed.
///
/// The bandit's randomness for invocation number m comes from its own
/// substream (bandit_seed, m), so the selection is a pure function of the
/// learner state and m. Computing it before or after the natural-graph
/// attempt therefore gives identical results.
class RlCabpDecoder {
 public:
  RlCabpDecoder(const PolarCode& code, const BpConfig& cfg, std::vector<Action> actions, BanditState state,
                std::uint64_t bandit_seed);

  /// Full frame, in order. With `eager_selection` the action is chosen
  /// before the first attempt and discarded on success.
  RlDecodeRecord decode(std::span<const double> llr, bool eager_selection = false);

  /// The two halves of decode(), for callers that run the stateless first
  /// attempt on a worker pool and funnel failures through one learner.
  DecodeOutcome decode_natural(std::span<const double> llr);
  RlDecodeRecord decode_with_bandit(std::span<const double> llr, DecodeOutcome natural);

  /// When false, selections still happen but the state is never updated.
  void set_learning(bool on) { learning_ = on; }
  bool learning() const { return learning_; }

  const BanditState& state() const { return state_; }
  void reset_state(BanditState state) { state_ = std::move(state); }
  const std::vector<Action>& actions() const { return actions_; }
  std::uint64_t invocations() const { return invocations_; }

  /// Runs every permutation of `action` in order; the bandit is not touched.
  BaselineRecord try_action(std::span<const double> llr, int action_index);

 private:
  int select_for(std::uint64_t invocation) const;
  RlDecodeRecord finish(std::span<const double> llr, DecodeOutcome natural, int arm);

  CabpDecoder decoder_;
  std::vector<Action> actions_;
  std::vector<std::vector<PermutationPlan>> plans_;
  PermutationPlan natural_;
  BanditState state_;
  std::uint64_t bandit_seed_;
  std::uint64_t invocations_ = 0;
  bool learning_ = true;
};

/// CABP (natural graph only), CP-CABP (the n cyclic shifts, identity
/// first), RP-CABP (natural graph, then M-1 fresh i.i.d. non-identity
/// permutations drawn from `rng`) and plain BP. Each stops at the first
/// CRC pass.
class BaselineDecoder {
 public:
  BaselineDecoder(const PolarCode& code, const BpConfig& cfg, Scheme scheme, int M);

  Scheme scheme() const { return scheme_; }
  BaselineRecord decode(std::span<const double> llr, Rng& rng);

 private:
  CabpDecoder decoder_;
  Scheme scheme_;
  int M_;
  PermutationPlan natural_;
  std::vector<PermutationPlan> cyclic_;
};

DecodeOutcome baseline_decode(std::span<const double> llr, Scheme scheme, const PolarCode& code,
                              const BpConfig& cfg, int M, Rng& rng);

}  // namespace polarrl
