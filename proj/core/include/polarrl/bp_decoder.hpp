#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "polarrl/bits.hpp"
#include "polarrl/permutation.hpp"
#include "polarrl/polar_code.hpp"

namespace polarrl {

using llr_t = float;

struct BpConfig {
  int i_max = 100;
  int i_min = 50;
  llr_t alpha = 0.9375F;
  /// Saturation magnitude; also stands in for the +infinity frozen pin.
  llr_t sat = 40.0F;
  /// Exchange extrinsics with the CRC Tanner graph from iteration i_min on.
  bool crc_aid = true;
  /// Check the CRC after every iteration >= i_min and stop on success.
  bool early_term = true;

  /// Plain BP: no CRC aid, no early termination, decide after i_max.
  static BpConfig plain_bp(int i_max = 100);

  void validate() const;
};

/// Scaled min-sum: alpha sgn(x) sgn(y) min(|x|, |y|), with sgn(0) = +1.
///
/// The sign comes from the IEEE sign bits. That differs from the sgn(0) = +1
/// rule only when an operand is a zero, and then the magnitude is zero too.
inline llr_t minsum_f(llr_t x, llr_t y, llr_t alpha = 0.9375F) {
  auto const bx = std::bit_cast<std::uint32_t>(x);
  auto const by = std::bit_cast<std::uint32_t>(y);
  auto const ax = std::bit_cast<llr_t>(bx & 0x7FFF'FFFFU);
  auto const ay = std::bit_cast<llr_t>(by & 0x7FFF'FFFFU);
  llr_t const m = ax < ay ? ax : ay;
  return alpha * std::bit_cast<llr_t>(std::bit_cast<std::uint32_t>(m) | ((bx ^ by) & 0x8000'0000U));
}

/// Left-to-right (R) and right-to-left (L) messages of the polar graph,
/// (n+1) x N each. R row 0 carries the frozen pins and the CRC extrinsics;
/// L row n carries the channel.
class MessageMemory {
 public:
  explicit MessageMemory(int n);

  int stages() const { return n_; }
  int length() const { return 1 << n_; }
  bool initialized() const { return initialized_; }

  std::span<llr_t> r(int s) { return {r_.data() + static_cast<std::size_t>(s) * length(), static_cast<std::size_t>(length())}; }
  std::span<llr_t> l(int s) { return {l_.data() + static_cast<std::size_t>(s) * length(), static_cast<std::size_t>(length())}; }
  std::span<const llr_t> r(int s) const { return {r_.data() + static_cast<std::size_t>(s) * length(), static_cast<std::size_t>(length())}; }
  std::span<const llr_t> l(int s) const { return {l_.data() + static_cast<std::size_t>(s) * length(), static_cast<std::size_t>(length())}; }

  /// Initial state: R[0][i] = +sat on frozen positions and 0 elsewhere,
  /// L[n] = channel clamped to [-sat, sat], everything else 0.
  void reset(std::span<const llr_t> channel, std::span<const Bit> frozen_mask, llr_t sat);

 private:
  int n_;
  std::vector<llr_t> r_;
  std::vector<llr_t> l_;
  bool initialized_ = false;
};

/// One flooding iteration: right-to-left sweep over stages n-1 .. 0, then
/// left-to-right sweep over stages 0 .. n-1. Every message is clamped to
/// [-sat, sat]. Throws if the memory was never reset.
void bp_iterate(MessageMemory& mem, const BpConfig& cfg);

/// u_i = 0 iff R[0][i] + L[0][i] >= 0.
BitVec hard_decision(const MessageMemory& mem);

/// Min-sum check-node pass on the Tanner graph of the CRC parity-check
/// matrix over the K information bits.
class CrcGraph {
 public:
  CrcGraph(const PolarCode& code, llr_t alpha);

  int checks() const { return static_cast<int>(rows_.size()); }
  const std::vector<std::vector<unsigned>>& rows() const { return rows_; }

  /// `priors` and `extrinsic` are indexed by information-word position
  /// (0..K-1). Writes the sum over checks of the check-to-variable
  /// messages; no state is carried between calls.
  void extrinsic(std::span<const llr_t> priors, std::span<llr_t> extrinsic) const;

 private:
  std::vector<std::vector<unsigned>> rows_;
  llr_t alpha_;
};

/// Length-N wrapper of CrcGraph::extrinsic: takes natural-order stage-0
/// beliefs and returns extrinsics on the info positions, 0 elsewhere.
std::vector<llr_t> crc_graph_pass(std::span<const llr_t> stage0_beliefs, const PolarCode& code,
                                  llr_t alpha = 0.9375F);

struct DecodeOutcome {
  BitVec u_hat;
  bool crc_ok = false;
  int iterations_used = 0;
  std::optional<int> permutation_id;
};

/// Everything the decoder needs to run on a permuted graph, precomputed.
/// Decoding happens on the natural graph in a relabelled index domain:
/// position j there corresponds to natural index tau(j).
struct PermutationPlan {
  int id = 0;
  bool identity = true;
  std::vector<unsigned> tau;
  BitVec frozen_mask;               // frozen_mask[j] = code frozen at tau(j)
  std::vector<unsigned> info_slot;  // info_slot[k] = tau^-1(info_set[k])

  static PermutationPlan make(const StagePermutation& perm, const PolarCode& code);
};

/// CRC-aided BP decoder. Owns its message memory, so one instance per
/// thread; instances may be moved between threads while idle.
class CabpDecoder {
 public:
  CabpDecoder(const PolarCode& code, const BpConfig& cfg);

  const PolarCode& code() const { return *code_; }
  const BpConfig& config() const { return cfg_; }

  DecodeOutcome decode(std::span<const double> llr, const PermutationPlan& plan);
  DecodeOutcome decode(std::span<const double> llr, const StagePermutation& perm);

  /// Memory of the last decode, in the permuted index domain.
  const MessageMemory& memory() const { return mem_; }

 private:
  bool check_crc(const PermutationPlan& plan);

  const PolarCode* code_;
  BpConfig cfg_;
  CrcGraph crc_graph_;
  MessageMemory mem_;
  std::vector<llr_t> channel_;
  BitVec info_word_;
  std::vector<llr_t> priors_;
  std::vector<llr_t> extrinsic_;
};

/// One-shot convenience wrapper around CabpDecoder.
DecodeOutcome cabp_decode(std::span<const double> llr, const StagePermutation& perm, const PolarCode& code,
                          const BpConfig& cfg);

}  // namespace polarrl
