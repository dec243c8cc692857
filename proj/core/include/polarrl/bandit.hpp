#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "polarrl/permutation.hpp"
#include "polarrl/rng.hpp"

namespace polarrl {

enum class BanditAlgo { eps_greedy, ucb, ts };

/// How a Thompson-sampling arm absorbs a reward. `literal` adds the reward
/// to both shape parameters and exists only for comparison runs.
enum class TsUpdateRule { standard, literal };

std::string_view to_string(BanditAlgo algo);
BanditAlgo parse_bandit_algo(std::string_view text);
std::string_view to_string(TsUpdateRule rule);
TsUpdateRule parse_ts_update_rule(std::string_view text);

struct BanditParams {
  BanditAlgo algo = BanditAlgo::eps_greedy;
  double epsilon = 0.0625;  // 2^-4
  double c = 0.125;         // 2^-3
  TsUpdateRule ts_rule = TsUpdateRule::standard;

  void validate() const;
};

/// One arm: a fixed bundle of M-1 non-identity stage permutations tried in
/// stored order. `id` is 1-based.
struct Action {
  int id = 0;
  std::vector<StagePermutation> perms;
};

/// binomial(n! - 1, M - 1); throws std::overflow_error when it does not fit
/// in 64 bits.
std::uint64_t k_max(int n, int M);

/// k actions of M-1 uniform non-identity permutations each. Permutations may
/// repeat across actions but not within one (a repeat is redrawn).
std::vector<Action> build_action_set(int n, int k, int M, Rng& rng);

struct ArmStats {
  double q = 0.0;
  std::uint64_t pulls = 0;
  double alpha = 1.0;
  double beta = 1.0;

  bool operator==(const ArmStats&) const = default;
};

/// Learner state for a k-armed Bernoulli bandit. Arm indices are 0-based
/// here; Action::id is index + 1.
class BanditState {
 public:
  BanditState(const BanditParams& params, int k);
  /// Restores a snapshot. Throws if the arms violate the state invariants
  /// (q outside [0,1] with pulls > 0, alpha or beta below 1, pulls not
  /// summing to t).
  BanditState(const BanditParams& params, std::vector<ArmStats> arms, std::uint64_t t);

  const BanditParams& params() const { return params_; }
  int arms() const { return static_cast<int>(arms_.size()); }
  std::uint64_t t() const { return t_; }
  const ArmStats& arm(int j) const { return arms_.at(static_cast<std::size_t>(j)); }
  const std::vector<ArmStats>& arm_stats() const { return arms_; }

  /// epsilon-greedy: greedy argmax with probability 1 - epsilon, otherwise a
  /// uniform arm. UCB: lowest-index unpulled arm if any, else argmax of
  /// q + c sqrt(ln t / pulls). TS: argmax of one Beta(alpha, beta) draw per
  /// arm. Ties go to the lowest index.
  int select(Rng& rng) const;

  /// Credits `reward` (0 or 1) to arm j and advances t.
  void update(int j, int reward);

  nlohmann::json to_json() const;
  static BanditState from_json(const nlohmann::json& j);

  bool operator==(const BanditState&) const = default;

 private:
  BanditParams params_;
  std::vector<ArmStats> arms_;
  std::uint64_t t_ = 0;
};

inline bool operator==(const BanditParams& a, const BanditParams& b) {
  return a.algo == b.algo && a.epsilon == b.epsilon && a.c == b.c && a.ts_rule == b.ts_rule;
}

}  // namespace polarrl
