#include "polarrl/bp_decoder.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "polarrl/crc.hpp"

namespace polarrl {

namespace {

inline llr_t clamp(llr_t v, llr_t sat) { return v > sat ? sat : (v < -sat ? -sat : v); }

// Stand-in for "no other variable" in a degree-1 check; clamped later.
constexpr llr_t kUnbounded = 1e30F;

}  // namespace

BpConfig BpConfig::plain_bp(int i_max) {
  BpConfig cfg;
  cfg.i_max = i_max;
  cfg.i_min = i_max - 1;
  cfg.crc_aid = false;
  cfg.early_term = false;
  return cfg;
}

void BpConfig::validate() const {
  if (!(0 < i_min && i_min < i_max)) {
    throw std::invalid_argument("BP config needs 0 < i_min < i_max (got i_min=" + std::to_string(i_min) +
                                ", i_max=" + std::to_string(i_max) + ")");
  }
  if (!(alpha > 0.0F && alpha <= 1.0F)) throw std::invalid_argument("BP config needs alpha in (0, 1]");
  if (!(sat > 0.0F)) throw std::invalid_argument("BP config needs sat > 0");
}

MessageMemory::MessageMemory(int n) : n_(n) {
  if (n < 1 || n > 20) throw std::invalid_argument("message memory needs 1 <= n <= 20");
  std::size_t const cells = static_cast<std::size_t>(n + 1) << n;
  r_.assign(cells, 0.0F);
  l_.assign(cells, 0.0F);
}

void MessageMemory::reset(std::span<const llr_t> channel, std::span<const Bit> frozen_mask, llr_t sat) {
  auto const N = static_cast<std::size_t>(length());
  if (channel.size() != N || frozen_mask.size() != N) throw std::invalid_argument("message memory size mismatch");
  std::fill(r_.begin(), r_.end(), 0.0F);
  std::fill(l_.begin(), l_.end(), 0.0F);
  auto r0 = r(0);
  for (std::size_t i = 0; i < N; ++i) r0[i] = frozen_mask[i] ? sat : 0.0F;
  auto ln = l(n_);
  for (std::size_t i = 0; i < N; ++i) ln[i] = clamp(channel[i], sat);
  initialized_ = true;
}

namespace {

// One stage of PEs. The first output is f(hi[i], a[j] + b[j]); the second
// is f(hi[i], cross[i]) + b[j]. Both sweeps share this shape.
template <std::size_t Half>
inline void pe_stage_fixed(llr_t* __restrict out, llr_t const* __restrict hi, llr_t const* __restrict a,
                           llr_t const* __restrict b, llr_t const* __restrict cross, std::size_t N, llr_t alpha,
                           llr_t sat) {
  for (std::size_t block = 0; block < N; block += 2 * Half) {
    for (std::size_t i = block; i < block + Half; ++i) {
      std::size_t const j = i + Half;
      out[i] = minsum_f(hi[i], a[j] + b[j], alpha);
      out[j] = clamp(minsum_f(hi[i], cross[i], alpha) + b[j], sat);
    }
  }
}

inline void pe_stage(llr_t* __restrict out, llr_t const* __restrict hi, llr_t const* __restrict a,
                     llr_t const* __restrict b, llr_t const* __restrict cross, std::size_t N, std::size_t half,
                     llr_t alpha, llr_t sat) {
  switch (half) {
    case 1: return pe_stage_fixed<1>(out, hi, a, b, cross, N, alpha, sat);
    case 2: return pe_stage_fixed<2>(out, hi, a, b, cross, N, alpha, sat);
    case 4: return pe_stage_fixed<4>(out, hi, a, b, cross, N, alpha, sat);
    default: break;
  }
  for (std::size_t block = 0; block < N; block += 2 * half) {
    for (std::size_t i = block; i < block + half; ++i) {
      std::size_t const j = i + half;
      out[i] = minsum_f(hi[i], a[j] + b[j], alpha);
      out[j] = clamp(minsum_f(hi[i], cross[i], alpha) + b[j], sat);
    }
  }
}

}  // namespace

void bp_iterate(MessageMemory& mem, const BpConfig& cfg) {
  if (!mem.initialized()) throw std::logic_error("bp_iterate on uninitialized message memory");
  int const n = mem.stages();
  std::size_t const N = static_cast<std::size_t>(mem.length());

  // f() output never exceeds its inputs' magnitude, so only sums need clamping.
  // Right to left:
  //   l[s][i]   = f(l[s+1][i], l[s+1][j] + r[s][j])
  //   l[s][j]   = f(l[s+1][i], r[s][i]) + l[s+1][j]
  for (int s = n - 1; s >= 0; --s) {
    std::size_t const half = std::size_t{1} << s;
    pe_stage(mem.l(s).data(), mem.l(s + 1).data(), mem.r(s).data(), mem.l(s + 1).data(), mem.r(s).data(), N, half,
             cfg.alpha, cfg.sat);
  }
  // Left to right:
  //   r[s+1][i] = f(r[s][i], l[s+1][j] + r[s][j])
  //   r[s+1][j] = f(r[s][i], l[s+1][i]) + r[s][j]
  for (int s = 0; s < n; ++s) {
    std::size_t const half = std::size_t{1} << s;
    pe_stage(mem.r(s + 1).data(), mem.r(s).data(), mem.l(s + 1).data(), mem.r(s).data(), mem.l(s + 1).data(), N, half,
             cfg.alpha, cfg.sat);
  }
}

BitVec hard_decision(const MessageMemory& mem) {
  auto const r0 = mem.r(0);
  auto const l0 = mem.l(0);
  BitVec u(r0.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = (r0[i] + l0[i] >= 0.0F) ? 0 : 1;
  return u;
}

CrcGraph::CrcGraph(const PolarCode& code, llr_t alpha) : alpha_(alpha) {
  auto const h = crc_parity_check_matrix(static_cast<std::size_t>(code.info_length()), code.crc());
  for (auto const& row : h) {
    std::vector<unsigned> vars;
    for (unsigned k = 0; k < row.size(); ++k) {
      if (row[k]) vars.push_back(k);
    }
    if (!vars.empty()) rows_.push_back(std::move(vars));
  }
}

void CrcGraph::extrinsic(std::span<const llr_t> priors, std::span<llr_t> extrinsic) const {
  std::fill(extrinsic.begin(), extrinsic.end(), 0.0F);
  for (auto const& row : rows_) {
    bool parity = false;
    llr_t min1 = kUnbounded;
    llr_t min2 = kUnbounded;
    unsigned argmin = row.front();
    for (unsigned v : row) {
      llr_t const x = priors[v];
      parity ^= (x < 0);
      llr_t const a = x < 0 ? -x : x;
      if (a < min1) {
        min2 = min1;
        min1 = a;
        argmin = v;
      } else if (a < min2) {
        min2 = a;
      }
    }
    for (unsigned v : row) {
      llr_t const m = (v == argmin) ? min2 : min1;
      bool const negative = parity != (priors[v] < 0);
      extrinsic[v] += alpha_ * (negative ? -m : m);
    }
  }
}

std::vector<llr_t> crc_graph_pass(std::span<const llr_t> stage0_beliefs, const PolarCode& code, llr_t alpha) {
  if (stage0_beliefs.size() != static_cast<std::size_t>(code.length())) {
    throw std::invalid_argument("crc_graph_pass expects N beliefs");
  }
  auto const& info = code.info_set();
  std::vector<llr_t> priors(info.size());
  for (std::size_t k = 0; k < info.size(); ++k) priors[k] = stage0_beliefs[info[k]];
  std::vector<llr_t> ext(info.size());
  CrcGraph(code, alpha).extrinsic(priors, ext);
  std::vector<llr_t> out(stage0_beliefs.size(), 0.0F);
  for (std::size_t k = 0; k < info.size(); ++k) out[info[k]] = ext[k];
  return out;
}

PermutationPlan PermutationPlan::make(const StagePermutation& perm, const PolarCode& code) {
  if (perm.stages() != code.stages()) throw std::invalid_argument("permutation and code differ in n");
  PermutationPlan plan;
  plan.id = perm.id();
  plan.identity = perm.is_identity();
  plan.tau = perm.bit_index_map();
  std::size_t const N = plan.tau.size();
  std::vector<unsigned> inv(N);
  plan.frozen_mask.resize(N);
  for (std::size_t j = 0; j < N; ++j) {
    inv[plan.tau[j]] = static_cast<unsigned>(j);
    plan.frozen_mask[j] = code.frozen_mask()[plan.tau[j]];
  }
  auto const& info = code.info_set();
  plan.info_slot.resize(info.size());
  for (std::size_t k = 0; k < info.size(); ++k) plan.info_slot[k] = inv[info[k]];
  return plan;
}

CabpDecoder::CabpDecoder(const PolarCode& code, const BpConfig& cfg)
    : code_(&code),
      cfg_(cfg),
      crc_graph_(code, cfg.alpha),
      mem_(code.stages()),
      channel_(static_cast<std::size_t>(code.length())),
      info_word_(static_cast<std::size_t>(code.info_length())),
      priors_(static_cast<std::size_t>(code.info_length())),
      extrinsic_(static_cast<std::size_t>(code.info_length())) {
  cfg_.validate();
}

bool CabpDecoder::check_crc(const PermutationPlan& plan) {
  auto const r0 = mem_.r(0);
  auto const l0 = mem_.l(0);
  for (std::size_t k = 0; k < plan.info_slot.size(); ++k) {
    unsigned const j = plan.info_slot[k];
    info_word_[k] = (r0[j] + l0[j] >= 0.0F) ? 0 : 1;
  }
  return crc_verify(info_word_, *code_);
}

DecodeOutcome CabpDecoder::decode(std::span<const double> llr, const PermutationPlan& plan) {
  std::size_t const N = channel_.size();
  if (llr.size() != N || plan.tau.size() != N) throw std::invalid_argument("decode: length mismatch");
  for (std::size_t j = 0; j < N; ++j) channel_[j] = static_cast<llr_t>(llr[plan.tau[j]]);
  mem_.reset(channel_, plan.frozen_mask, cfg_.sat);

  bool crc_ok = false;
  int it = 1;
  for (; it <= cfg_.i_max; ++it) {
    bp_iterate(mem_, cfg_);
    if (it < cfg_.i_min) continue;
    if (cfg_.early_term || it == cfg_.i_max) {
      crc_ok = check_crc(plan);
      if (crc_ok) break;
    }
    if (cfg_.crc_aid && it < cfg_.i_max) {
      // The CRC graph sees the polar graph's extrinsic l_0 in natural
      // information order; its answer replaces the previous one in R[0].
      auto const l0 = mem_.l(0);
      for (std::size_t k = 0; k < priors_.size(); ++k) priors_[k] = l0[plan.info_slot[k]];
      crc_graph_.extrinsic(priors_, extrinsic_);
      auto r0 = mem_.r(0);
      for (std::size_t k = 0; k < extrinsic_.size(); ++k) r0[plan.info_slot[k]] = clamp(extrinsic_[k], cfg_.sat);
    }
  }

  DecodeOutcome out;
  out.crc_ok = crc_ok;
  out.iterations_used = std::min(it, cfg_.i_max);
  out.permutation_id = plan.id;
  out.u_hat.assign(N, 0);
  auto const r0 = mem_.r(0);
  auto const l0 = mem_.l(0);
  for (std::size_t j = 0; j < N; ++j) out.u_hat[plan.tau[j]] = (r0[j] + l0[j] >= 0.0F) ? 0 : 1;
  return out;
}

DecodeOutcome CabpDecoder::decode(std::span<const double> llr, const StagePermutation& perm) {
  return decode(llr, PermutationPlan::make(perm, *code_));
}

DecodeOutcome cabp_decode(std::span<const double> llr, const StagePermutation& perm, const PolarCode& code,
                          const BpConfig& cfg) {
  CabpDecoder decoder(code, cfg);
  return decoder.decode(llr, perm);
}

}  // namespace polarrl
