#include "polarrl/bandit.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include <boost/random/beta_distribution.hpp>
#include <boost/random/uniform_int_distribution.hpp>

namespace polarrl {

std::string_view to_string(BanditAlgo algo) {
  switch (algo) {
    case BanditAlgo::eps_greedy: return "eps-greedy";
    case BanditAlgo::ucb: return "ucb";
    case BanditAlgo::ts: return "ts";
  }
  return "?";
}

BanditAlgo parse_bandit_algo(std::string_view text) {
  if (text == "eps-greedy" || text == "epsilon-greedy") return BanditAlgo::eps_greedy;
  if (text == "ucb") return BanditAlgo::ucb;
  if (text == "ts" || text == "thompson") return BanditAlgo::ts;
  throw std::invalid_argument("unknown bandit algorithm '" + std::string(text) + "'");
}

std::string_view to_string(TsUpdateRule rule) { return rule == TsUpdateRule::standard ? "standard" : "literal"; }

TsUpdateRule parse_ts_update_rule(std::string_view text) {
  if (text == "standard") return TsUpdateRule::standard;
  if (text == "literal") return TsUpdateRule::literal;
  throw std::invalid_argument("unknown TS update rule '" + std::string(text) + "'");
}

void BanditParams::validate() const {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in [0, 1]");
  if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("UCB c must be positive");
}

std::uint64_t k_max(int n, int M) {
  if (n < 2 || M < 2) throw std::invalid_argument("k_max needs n >= 2 and M >= 2");
  if (n > 20) throw std::overflow_error("n! overflows 64 bits");
  std::uint64_t fact = 1;
  for (int i = 2; i <= n; ++i) fact *= static_cast<std::uint64_t>(i);
  std::uint64_t const pool = fact - 1;
  std::uint64_t const choose = static_cast<std::uint64_t>(M - 1);
  if (choose > pool) return 0;
  std::uint64_t const r = std::min(choose, pool - choose);
  // C(pool, i+1) = C(pool, i) * (pool - i) / (i + 1). Dividing the gcd out
  // of C(pool, i) first leaves a divisor that must divide (pool - i).
  std::uint64_t acc = 1;
  for (std::uint64_t i = 0; i < r; ++i) {
    std::uint64_t const g = std::gcd(acc, i + 1);
    std::uint64_t const factor = (pool - i) / ((i + 1) / g);
    if (__builtin_mul_overflow(acc / g, factor, &acc)) throw std::overflow_error("k_max overflows 64 bits");
  }
  return acc;
}

std::vector<Action> build_action_set(int n, int k, int M, Rng& rng) {
  if (M <= 1) throw std::invalid_argument("action set needs M > 1");
  if (k < 1) throw std::invalid_argument("action set needs k >= 1");
  std::uint64_t limit = std::numeric_limits<std::uint64_t>::max();
  try {
    limit = k_max(n, M);
  } catch (const std::overflow_error&) {
  }
  if (static_cast<std::uint64_t>(k) > limit) {
    throw std::invalid_argument("k=" + std::to_string(k) + " exceeds k_max=" + std::to_string(limit));
  }
  std::vector<Action> actions;
  actions.reserve(static_cast<std::size_t>(k));
  for (int j = 1; j <= k; ++j) {
    Action action{j, {}};
    while (static_cast<int>(action.perms.size()) < M - 1) {
      StagePermutation p = random_stage_permutation(n, rng, true);
      bool repeated = false;
      for (auto const& q : action.perms) repeated = repeated || q == p;
      if (!repeated) action.perms.push_back(p.with_id(static_cast<int>(action.perms.size()) + 1));
    }
    actions.push_back(std::move(action));
  }
  return actions;
}

BanditState::BanditState(const BanditParams& params, int k) : params_(params) {
  params_.validate();
  if (k < 1) throw std::invalid_argument("bandit needs k >= 1");
  arms_.assign(static_cast<std::size_t>(k), ArmStats{});
}

BanditState::BanditState(const BanditParams& params, std::vector<ArmStats> arms, std::uint64_t t)
    : params_(params), arms_(std::move(arms)), t_(t) {
  params_.validate();
  if (arms_.empty()) throw std::invalid_argument("bandit needs k >= 1");
  std::uint64_t total = 0;
  for (auto const& a : arms_) {
    if (a.pulls > 0 && !(a.q >= 0.0 && a.q <= 1.0)) throw std::invalid_argument("arm value outside [0, 1]");
    if (!(a.alpha >= 1.0 && a.beta >= 1.0)) throw std::invalid_argument("Beta shape below 1");
    total += a.pulls;
  }
  if (total != t_) throw std::invalid_argument("arm pulls do not sum to t");
}

int BanditState::select(Rng& rng) const {
  int const k = arms();
  auto argmax = [k](auto&& score) {
    int best = 0;
    double best_score = score(0);
    for (int j = 1; j < k; ++j) {
      double const s = score(j);
      if (s > best_score) {
        best = j;
        best_score = s;
      }
    }
    return best;
  };

  switch (params_.algo) {
    case BanditAlgo::eps_greedy: {
      if (uniform01(rng) < params_.epsilon) {
        boost::random::uniform_int_distribution<int> pick(0, k - 1);
        return pick(rng);
      }
      return argmax([this](int j) { return arms_[j].q; });
    }
    case BanditAlgo::ucb: {
      for (int j = 0; j < k; ++j) {
        if (arms_[j].pulls == 0) return j;
      }
      double const log_t = std::log(static_cast<double>(t_));
      return argmax([this, log_t](int j) {
        return arms_[j].q + params_.c * std::sqrt(log_t / static_cast<double>(arms_[j].pulls));
      });
    }
    case BanditAlgo::ts: {
      std::vector<double> draws(static_cast<std::size_t>(k));
      for (int j = 0; j < k; ++j) {
        boost::random::beta_distribution<double> beta(arms_[j].alpha, arms_[j].beta);
        draws[j] = beta(rng);
      }
      return argmax([&draws](int j) { return draws[j]; });
    }
  }
  throw std::logic_error("unreachable bandit algorithm");
}

void BanditState::update(int j, int reward) {
  if (j < 0 || j >= arms()) throw std::out_of_range("bandit arm index out of range");
  if (reward != 0 && reward != 1) throw std::invalid_argument("bandit reward must be 0 or 1");
  ArmStats& a = arms_[j];
  ++t_;
  ++a.pulls;
  a.q += (reward - a.q) / static_cast<double>(a.pulls);
  if (params_.ts_rule == TsUpdateRule::standard) {
    a.alpha += reward;
    a.beta += 1 - reward;
  } else {
    a.alpha += reward;
    a.beta += reward;
  }
}

nlohmann::json BanditState::to_json() const {
  nlohmann::json arms = nlohmann::json::array();
  for (auto const& a : arms_) {
    arms.push_back({{"q", a.q}, {"pulls", a.pulls}, {"alpha", a.alpha}, {"beta", a.beta}});
  }
  return {
      {"algo", to_string(params_.algo)},
      {"epsilon", params_.epsilon},
      {"c", params_.c},
      {"ts_update", to_string(params_.ts_rule)},
      {"t", t_},
      {"arms", std::move(arms)},
  };
}

BanditState BanditState::from_json(const nlohmann::json& j) {
  BanditParams params;
  params.algo = parse_bandit_algo(j.at("algo").get<std::string>());
  params.epsilon = j.at("epsilon").get<double>();
  params.c = j.at("c").get<double>();
  params.ts_rule = parse_ts_update_rule(j.at("ts_update").get<std::string>());
  std::vector<ArmStats> arms;
  for (auto const& a : j.at("arms")) {
    arms.push_back({a.at("q").get<double>(), a.at("pulls").get<std::uint64_t>(), a.at("alpha").get<double>(),
                    a.at("beta").get<double>()});
  }
  return BanditState(params, std::move(arms), j.at("t").get<std::uint64_t>());
}

}  // namespace polarrl
