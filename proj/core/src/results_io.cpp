#include "polarrl/sim.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#ifndef POLARRL_VERSION
#define POLARRL_VERSION "unknown"
#endif
#ifndef POLARRL_GIT_REVISION
#define POLARRL_GIT_REVISION "unknown"
#endif

namespace polarrl {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

nlohmann::json running_average(const std::vector<int>& trace) {
  nlohmann::json out = nlohmann::json::array();
  std::uint64_t sum = 0;
  for (std::size_t t = 0; t < trace.size(); ++t) {
    sum += static_cast<std::uint64_t>(trace[t]);
    out.push_back(static_cast<double>(sum) / static_cast<double>(t + 1));
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

std::string library_version() { return std::string(POLARRL_VERSION) + "+" + POLARRL_GIT_REVISION; }

OutputFormat parse_output_format(std::string_view text) {
  if (text == "csv") return OutputFormat::csv;
  if (text == "json") return OutputFormat::json;
  if (text == "both") return OutputFormat::both;
  throw std::invalid_argument("unknown output format '" + std::string(text) + "'");
}

void write_fer_csv(std::ostream& out, const CampaignResult& result) {
  out << "ebn0_db,frames,errors,fer,mean_iters,mean_attempts,undetected_errors\n";
  for (auto const& p : result.points) {
    out << num(p.ebn0_db) << ',' << p.frames << ',' << p.frame_errors << ',' << num(p.fer()) << ','
        << num(p.mean_iterations()) << ',' << num(p.mean_attempts()) << ',' << p.undetected_errors << '\n';
  }
}

nlohmann::json fer_to_json(const CampaignResult& result) {
  nlohmann::json points = nlohmann::json::array();
  for (auto const& p : result.points) {
    auto const [lo, hi] = binomial_interval(p.frame_errors, p.frames);
    points.push_back({
        {"ebn0_db", p.ebn0_db},
        {"sigma2", p.sigma2},
        {"frames", p.frames},
        {"frame_errors", p.frame_errors},
        {"undetected_errors", p.undetected_errors},
        {"fer", p.fer()},
        {"fer_ci95", {lo, hi}},
        {"mean_iters", p.mean_iterations()},
        {"mean_attempts", p.mean_attempts()},
        {"total_iterations", p.total_iterations},
        {"total_attempts", p.total_attempts},
        {"bandit_invocations", p.bandit_invocations},
        {"bandit_rewards", p.bandit_rewards},
    });
  }
  auto const& cfg = result.config;
  return {
      {"version", result.version},
      {"config", cfg.to_json()},
      {"metadata",
       {
           {"rate_convention", to_string(cfg.rate)},
           {"learner_mode", to_string(cfg.learner)},
           {"learner_reset_per_point", cfg.reset_per_point},
           {"frame_error", "crc failure or wrong information word; undetected_errors counts the latter with a passing crc"},
           {"rng", "mt19937_64 per (seed, stream, point, frame) via splitmix64; boost.random distributions"},
       }},
      {"points", std::move(points)},
      {"reward_trace", result.reward_trace},
      {"average_cumulative_reward", running_average(result.reward_trace)},
      {"final_bandit_state", result.final_bandit_state ? *result.final_bandit_state : nlohmann::json(nullptr)},
  };
}

CampaignResult fer_from_json(const nlohmann::json& j) {
  CampaignResult r;
  r.version = j.at("version").get<std::string>();
  r.config = CampaignConfig::from_json(j.at("config"));
  for (auto const& p : j.at("points")) {
    PointResult pt;
    pt.ebn0_db = p.at("ebn0_db").get<double>();
    pt.sigma2 = p.at("sigma2").get<double>();
    pt.frames = p.at("frames").get<std::uint64_t>();
    pt.frame_errors = p.at("frame_errors").get<std::uint64_t>();
    pt.undetected_errors = p.at("undetected_errors").get<std::uint64_t>();
    pt.total_iterations = p.at("total_iterations").get<std::uint64_t>();
    pt.total_attempts = p.at("total_attempts").get<std::uint64_t>();
    pt.bandit_invocations = p.at("bandit_invocations").get<std::uint64_t>();
    pt.bandit_rewards = p.at("bandit_rewards").get<std::uint64_t>();
    r.points.push_back(pt);
  }
  r.reward_trace = j.at("reward_trace").get<std::vector<int>>();
  if (auto const& s = j.at("final_bandit_state"); !s.is_null()) r.final_bandit_state = s;
  return r;
}

void write_study_csv(std::ostream& out, std::span<const StudyRow> rows) {
  out << "param,value,label,time_steps,cumulative_reward,mean_reward\n";
  for (auto const& row : rows) {
    out << row.param << ',' << num(row.value) << ',' << row.label << ',' << row.time_steps << ','
        << row.cumulative_reward << ',' << num(row.mean_reward) << '\n';
  }
}

nlohmann::json study_to_json(const CampaignConfig& cfg, std::span<const StudyRow> rows) {
  nlohmann::json out_rows = nlohmann::json::array();
  for (auto const& row : rows) {
    out_rows.push_back({
        {"param", row.param},
        {"value", row.value},
        {"label", row.label},
        {"time_steps", row.time_steps},
        {"cumulative_reward", row.cumulative_reward},
        {"mean_reward", row.mean_reward},
        {"reward_trace", row.trace},
        {"average_cumulative_reward", running_average(row.trace)},
    });
  }
  return {{"version", library_version()}, {"config", cfg.to_json()}, {"rows", std::move(out_rows)}};
}

std::vector<std::filesystem::path> emit_results(const CampaignResult& result, const std::filesystem::path& dir,
                                                std::string_view stem, OutputFormat format) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  if (format != OutputFormat::json) {
    std::ostringstream csv;
    write_fer_csv(csv, result);
    written.push_back(dir / (std::string(stem) + ".csv"));
    write_file(written.back(), csv.str());
  }
  if (format != OutputFormat::csv) {
    written.push_back(dir / (std::string(stem) + ".json"));
    write_file(written.back(), fer_to_json(result).dump(2) + "\n");
  }
  return written;
}

std::vector<std::filesystem::path> emit_study(const CampaignConfig& cfg, std::span<const StudyRow> rows,
                                              const std::filesystem::path& dir, std::string_view stem,
                                              OutputFormat format) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  if (format != OutputFormat::json) {
    std::ostringstream csv;
    write_study_csv(csv, rows);
    written.push_back(dir / (std::string(stem) + ".csv"));
    write_file(written.back(), csv.str());
  }
  if (format != OutputFormat::csv) {
    written.push_back(dir / (std::string(stem) + ".json"));
    write_file(written.back(), study_to_json(cfg, rows).dump(2) + "\n");
  }
  return written;
}

}  // namespace polarrl
