#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "polarrl/bandit.hpp"
#include "polarrl/bp_decoder.hpp"
#include "polarrl/channel.hpp"
#include "polarrl/rl_decoder.hpp"

namespace polarrl {

/// Whether the bandit keeps learning while FER points are measured.
enum class LearnerMode { continual, frozen };

std::string_view to_string(LearnerMode mode);
LearnerMode parse_learner_mode(std::string_view text);

struct CampaignConfig {
  // code
  int n = 7;
  int K = 64;
  std::string crc = "16,12,5,0";
  std::string reliability_file;  // empty: built-in 38.212 sequence
  std::string frozen_file;       // overrides the reliability order when set

  // decoder
  Scheme scheme = Scheme::cabp;
  BpConfig bp;
  BanditParams bandit;
  int k = 500;
  int M = 7;
  LearnerMode learner = LearnerMode::continual;
  bool reset_per_point = false;
  std::uint64_t pretrain_steps = 0;
  double pretrain_ebn0_db = 3.0;

  // channel and stop rule
  std::vector<double> ebn0_grid{3.0};
  RateConvention rate = RateConvention::code_rate;
  std::uint64_t max_frames = 1'000'000;
  std::uint64_t min_frame_errors = 100;
  std::uint64_t time_step_budget = 10'000;

  std::uint64_t base_seed = 1;
  /// Worker threads for the stateless part of each frame. Results do not
  /// depend on this value, so it is not echoed into result files.
  unsigned threads = 1;

  void validate() const;
  PolarCode make_code() const;
  /// BP settings actually used for `scheme` (plain BP disables the CRC aid).
  BpConfig effective_bp() const;

  nlohmann::json to_json() const;
  static CampaignConfig from_json(const nlohmann::json& j);
  bool operator==(const CampaignConfig& other) const { return to_json() == other.to_json(); }
};

/// Exact (Clopper-Pearson) two-sided interval for a binomial proportion.
std::pair<double, double> binomial_interval(std::uint64_t successes, std::uint64_t trials, double confidence = 0.95);

struct PointResult {
  double ebn0_db = 0.0;
  double sigma2 = 0.0;
  std::uint64_t frames = 0;
  std::uint64_t frame_errors = 0;       // includes undetected errors
  std::uint64_t undetected_errors = 0;  // CRC passed on a wrong word
  std::uint64_t total_iterations = 0;
  std::uint64_t total_attempts = 0;
  std::uint64_t bandit_invocations = 0;
  std::uint64_t bandit_rewards = 0;

  double fer() const { return frames ? static_cast<double>(frame_errors) / static_cast<double>(frames) : 0.0; }
  double mean_iterations() const;
  double mean_attempts() const;

  bool operator==(const PointResult&) const = default;
};

struct CampaignResult {
  std::string version;
  CampaignConfig config;
  std::vector<PointResult> points;
  /// Rewards in learner order across all points (RL-CABP only).
  std::vector<int> reward_trace;
  std::optional<nlohmann::json> final_bandit_state;

  bool operator==(const CampaignResult&) const = default;
};

/// Deterministic frame generator for one Eb/N0 point: uniform payload,
/// CRC, polar encoding, BPSK/AWGN. Frame i depends only on
/// (seed, point, i).
class FrameSource {
 public:
  struct Frame {
    BitVec info_word;
    std::vector<double> llr;
  };

  FrameSource(const PolarCode& code, double sigma2, std::uint64_t seed, std::uint64_t point);

  Frame make(std::uint64_t index) const;
  Rng scheme_rng(std::uint64_t index) const;
  double sigma2() const { return sigma2_; }

 private:
  const PolarCode* code_;
  double sigma2_;
  std::uint64_t seed_;
  std::uint64_t point_;
};

/// Builds the action set used by every RL campaign with this seed. Sets for
/// different k share a prefix.
std::vector<Action> campaign_action_set(const CampaignConfig& cfg);

CampaignResult run_fer_campaign(const CampaignConfig& cfg);

struct StudyRow {
  std::string param;
  double value = 0.0;
  std::string label;
  std::uint64_t time_steps = 0;
  std::uint64_t cumulative_reward = 0;
  double mean_reward = 0.0;
  std::vector<int> trace;

  bool operator==(const StudyRow&) const = default;
};

/// Frames at ebn0_grid.front() whose natural-graph decode fails, in frame
/// order, until `budget` of them are found. Every study row replays the
/// same failures, so grid values are compared on paired noise.
struct FailureSet {
  std::vector<std::vector<double>> llr;
  std::vector<DecodeOutcome> natural;
  std::uint64_t frames_scanned = 0;
};
FailureSet collect_failures(const CampaignConfig& cfg, const PolarCode& code, std::uint64_t budget);

/// Average reward over the first time_step_budget bandit invocations for
/// each value of "epsilon" (eps-greedy) or "c" (UCB).
std::vector<StudyRow> run_reward_study(const CampaignConfig& cfg, std::string_view param, std::span<const double> grid);
/// One row per algorithm with the configured epsilon and c.
std::vector<StudyRow> run_algo_study(const CampaignConfig& cfg, std::span<const BanditAlgo> algos);
/// Cumulative reward at the budget for each action-set size k.
std::vector<StudyRow> run_k_study(const CampaignConfig& cfg, std::span<const int> k_grid);

/// The same studies over an already collected failure set.
std::vector<StudyRow> run_reward_study(const CampaignConfig& cfg, const FailureSet& failures, std::string_view param,
                                       std::span<const double> grid);
std::vector<StudyRow> run_algo_study(const CampaignConfig& cfg, const FailureSet& failures,
                                     std::span<const BanditAlgo> algos);
std::vector<StudyRow> run_k_study(const CampaignConfig& cfg, const FailureSet& failures, std::span<const int> k_grid);

enum class OutputFormat { csv, json, both };
OutputFormat parse_output_format(std::string_view text);

std::string library_version();

void write_fer_csv(std::ostream& out, const CampaignResult& result);
nlohmann::json fer_to_json(const CampaignResult& result);
CampaignResult fer_from_json(const nlohmann::json& j);

void write_study_csv(std::ostream& out, std::span<const StudyRow> rows);
nlohmann::json study_to_json(const CampaignConfig& cfg, std::span<const StudyRow> rows);

/// Writes <dir>/<stem>.csv and/or <dir>/<stem>.json; returns the paths.
std::vector<std::filesystem::path> emit_results(const CampaignResult& result, const std::filesystem::path& dir,
                                                std::string_view stem, OutputFormat format);
std::vector<std::filesystem::path> emit_study(const CampaignConfig& cfg, std::span<const StudyRow> rows,
                                              const std::filesystem::path& dir, std::string_view stem,
                                              OutputFormat format);

}  // namespace polarrl
