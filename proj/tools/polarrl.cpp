// polarrl: Monte-Carlo campaigns and parameter studies for CRC-aided BP
// decoding of polar codes with bandit-selected factor-graph permutations.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "polarrl/sim.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace polarrl;

namespace {

std::string trim(const std::string& s) {
  auto const b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto const e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Converts the text of one config value to the JSON type of `like`.
json coerce(const std::string& text, const json& like, const std::string& key) {
  if (like.is_string()) {
    if (text.size() >= 2 && text.front() == '"' && text.back() == '"') return text.substr(1, text.size() - 2);
    return text;
  }
  json v;
  try {
    v = json::parse(like.is_array() && text.front() != '[' ? "[" + text + "]" : text);
  } catch (const json::parse_error&) {
    throw std::invalid_argument("bad value for '" + key + "': " + text);
  }
  bool const ok = (like.is_boolean() && v.is_boolean()) || (like.is_number() && v.is_number()) ||
                  (like.is_array() && v.is_array());
  if (!ok) throw std::invalid_argument("bad value for '" + key + "': " + text);
  if (like.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw std::invalid_argument("'" + key + "' must be a non-negative integer");
  }
  if (like.is_number_integer() && !v.is_number_integer()) {
    throw std::invalid_argument("'" + key + "' must be an integer");
  }
  return v;
}

// key = value lines; '#' comments and [section] headers are ignored.
void apply_config_file(const fs::path& path, json& cfg, unsigned& threads) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto const hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;
    auto const eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    }
    auto const key = trim(line.substr(0, eq));
    auto const value = trim(line.substr(eq + 1));
    if (value.empty()) throw std::invalid_argument(path.string() + ":" + std::to_string(lineno) + ": empty value");
    if (key == "threads") {
      threads = static_cast<unsigned>(std::stoul(value));
      continue;
    }
    if (!cfg.contains(key)) throw std::invalid_argument(path.string() + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    cfg[key] = coerce(value, cfg[key], key);
  }
}

struct Options {
  std::string config_file;
  std::vector<double> ebn0;
  std::uint64_t seed = 0;
  std::string rate;
  std::string decoder;
  std::string algo;
  double epsilon = 0.0;
  double c = 0.0;
  std::string ts_update;
  int k = 0;
  int M = 0;
  std::string learner;
  int i_max = 0;
  int i_min = 0;
  std::uint64_t max_frames = 0;
  std::uint64_t min_errors = 0;
  std::uint64_t budget = 0;
  std::uint64_t pretrain = 0;
  unsigned threads = 0;
  std::string out;
  std::string format = "both";
  std::string stem;
};

struct Flags {
  std::vector<std::pair<CLI::Option*, std::string>> keyed;  // flag -> config key
  CLI::Option* threads = nullptr;
};

Flags add_campaign_flags(CLI::App& app, Options& o) {
  Flags f;
  app.add_option("--config", o.config_file, "key = value config file")->check(CLI::ExistingFile);
  auto key = [&](CLI::Option* opt, const char* name) { f.keyed.emplace_back(opt, name); };
  key(app.add_option("--ebn0-db", o.ebn0, "Eb/N0 points in dB")->delimiter(','), "ebn0_grid");
  key(app.add_option("--seed", o.seed, "base seed"), "base_seed");
  key(app.add_option("--rate-convention", o.rate, "code-rate or payload-rate"), "rate_convention");
  key(app.add_option("--decoder", o.decoder, "bp, cabp, cp-cabp, rp-cabp or rl-cabp"), "decoder");
  key(app.add_option("--algo", o.algo, "eps-greedy, ucb or ts"), "algo");
  key(app.add_option("--epsilon", o.epsilon, "eps-greedy exploration rate"), "epsilon");
  key(app.add_option("--c", o.c, "UCB exploration weight"), "c");
  key(app.add_option("--ts-update", o.ts_update, "standard or literal"), "ts_update");
  key(app.add_option("--k", o.k, "number of actions"), "k");
  key(app.add_option("--M", o.M, "decoding attempts per frame"), "M");
  key(app.add_option("--learner", o.learner, "continual or frozen"), "learner");
  key(app.add_option("--i-max", o.i_max, "maximum BP iterations"), "i_max");
  key(app.add_option("--i-min", o.i_min, "first iteration with CRC aid"), "i_min");
  key(app.add_option("--max-frames", o.max_frames, "frame cap per point"), "max_frames");
  key(app.add_option("--min-errors", o.min_errors, "frame errors that end a point"), "min_frame_errors");
  key(app.add_option("--budget", o.budget, "bandit time steps per study row"), "time_step_budget");
  key(app.add_option("--pretrain-steps", o.pretrain, "bandit steps before a frozen campaign"), "pretrain_steps");
  f.threads = app.add_option("--threads", o.threads, "worker threads (0: all cores)");
  app.add_option("--out", o.out, "output directory (default $POLARRL_OUTPUT_DIR or ./results)");
  app.add_option("--format", o.format, "csv, json or both")->check(CLI::IsMember({"csv", "json", "both"}));
  app.add_option("--stem", o.stem, "output file stem");
  return f;
}

json flag_value(const Options& o, const std::string& key) {
  if (key == "ebn0_grid") return o.ebn0;
  if (key == "base_seed") return o.seed;
  if (key == "rate_convention") return o.rate;
  if (key == "decoder") return o.decoder;
  if (key == "algo") return o.algo;
  if (key == "epsilon") return o.epsilon;
  if (key == "c") return o.c;
  if (key == "ts_update") return o.ts_update;
  if (key == "k") return o.k;
  if (key == "M") return o.M;
  if (key == "learner") return o.learner;
  if (key == "i_max") return o.i_max;
  if (key == "i_min") return o.i_min;
  if (key == "max_frames") return o.max_frames;
  if (key == "min_frame_errors") return o.min_errors;
  if (key == "time_step_budget") return o.budget;
  return o.pretrain;
}

CampaignConfig resolve(const Options& o, const Flags& f) {
  json j = CampaignConfig{}.to_json();
  unsigned threads = 1;
  if (!o.config_file.empty()) apply_config_file(o.config_file, j, threads);
  for (auto const& [opt, key] : f.keyed) {
    if (opt->count() > 0) j[key] = flag_value(o, key);
  }
  auto cfg = CampaignConfig::from_json(j);
  if (f.threads->count() > 0) threads = o.threads;
  cfg.threads = threads == 0 ? std::max(1U, std::thread::hardware_concurrency()) : threads;
  cfg.validate();
  return cfg;
}

fs::path output_dir(const Options& o) {
  if (!o.out.empty()) return o.out;
  if (char const* env = std::getenv("POLARRL_OUTPUT_DIR"); env && *env) return env;
  return "results";
}

void report(const std::vector<fs::path>& paths) {
  for (auto const& p : paths) std::cout << "wrote " << p.string() << '\n';
}

int run_fer(const Options& o, const Flags& f) {
  auto const cfg = resolve(o, f);
  auto const result = run_fer_campaign(cfg);
  std::cout << "decoder " << to_string(cfg.scheme) << ", " << cfg.max_frames << " frames max\n";
  for (auto const& p : result.points) {
    auto const [lo, hi] = binomial_interval(p.frame_errors, p.frames);
    std::cout << "  " << p.ebn0_db << " dB: " << p.frame_errors << "/" << p.frames << " FER " << p.fer() << " [" << lo
              << ", " << hi << "] iters " << p.mean_iterations() << " attempts " << p.mean_attempts() << '\n';
  }
  report(emit_results(result, output_dir(o), o.stem.empty() ? "fer" : o.stem, parse_output_format(o.format)));
  return 0;
}

void print_rows(const std::vector<StudyRow>& rows) {
  for (auto const& r : rows) {
    std::cout << "  " << r.param << "=" << r.value << " " << r.label << ": reward " << r.cumulative_reward << "/"
              << r.time_steps << " (mean " << r.mean_reward << ")\n";
  }
}

int run_reward(const Options& o, const Flags& f, const std::string& param, std::vector<double> grid) {
  auto const cfg = resolve(o, f);
  std::vector<StudyRow> rows;
  if (param == "algo") {
    std::vector<BanditAlgo> const algos{BanditAlgo::eps_greedy, BanditAlgo::ucb, BanditAlgo::ts};
    rows = run_algo_study(cfg, algos);
  } else {
    if (grid.empty()) {
      for (int e = -6; e <= -1; ++e) grid.push_back(std::ldexp(1.0, e));
    }
    rows = run_reward_study(cfg, param, grid);
  }
  print_rows(rows);
  auto const stem = o.stem.empty() ? "reward_" + param : o.stem;
  report(emit_study(cfg, rows, output_dir(o), stem, parse_output_format(o.format)));
  return 0;
}

int run_k(const Options& o, const Flags& f, std::vector<int> grid) {
  auto const cfg = resolve(o, f);
  if (grid.empty()) grid = {10, 50, 100, 500, 1000};
  auto const rows = run_k_study(cfg, grid);
  print_rows(rows);
  report(emit_study(cfg, rows, output_dir(o), o.stem.empty() ? "k_study" : o.stem, parse_output_format(o.format)));
  return 0;
}

int run_code_info(const Options& o, const Flags& f) {
  auto const cfg = resolve(o, f);
  auto const code = cfg.make_code();
  json k_max_value;
  try {
    k_max_value = k_max(code.stages(), cfg.M);
  } catch (const std::overflow_error&) {
    k_max_value = "exceeds 2^64";
  }
  json const info{
      {"N", code.length()},
      {"K", code.info_length()},
      {"crc", code.crc().to_string()},
      {"crc_bits", code.crc_length()},
      {"payload_bits", code.payload_length()},
      {"code_rate", rate_of(code, RateConvention::code_rate)},
      {"payload_rate", rate_of(code, RateConvention::payload_rate)},
      {"info_set", code.info_set()},
      {"frozen_set", code.frozen_set()},
      {"M", cfg.M},
      {"k_max", k_max_value},
  };
  std::cout << info.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CRC-aided BP decoding of polar codes with bandit-selected graph permutations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", library_version());

  Options fer_opts;
  auto* fer = app.add_subcommand("fer", "frame error rate campaign over an Eb/N0 grid");
  auto const fer_flags = add_campaign_flags(*fer, fer_opts);

  Options reward_opts;
  std::string param = "epsilon";
  std::vector<double> grid;
  auto* reward = app.add_subcommand("reward-study", "mean bandit reward per exploration setting");
  auto const reward_flags = add_campaign_flags(*reward, reward_opts);
  reward->add_option("--param", param, "epsilon, c or algo")->check(CLI::IsMember({"epsilon", "c", "algo"}));
  reward->add_option("--grid", grid, "values of the parameter (default 2^-6 .. 2^-1)")->delimiter(',');

  Options k_opts;
  std::vector<int> k_grid;
  auto* kstudy = app.add_subcommand("k-study", "cumulative reward per action-set size");
  auto const k_flags = add_campaign_flags(*kstudy, k_opts);
  kstudy->add_option("--k-grid", k_grid, "action-set sizes")->delimiter(',');

  Options info_opts;
  auto* info = app.add_subcommand("code-info", "print the code construction as JSON");
  auto const info_flags = add_campaign_flags(*info, info_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*fer) return run_fer(fer_opts, fer_flags);
    if (*reward) return run_reward(reward_opts, reward_flags, param, grid);
    if (*kstudy) return run_k(k_opts, k_flags, k_grid);
    return run_code_info(info_opts, info_flags);
  } catch (const std::exception& e) {
    std::cerr << "polarrl: " << e.what() << '\n';
    return 2;
  }
}
