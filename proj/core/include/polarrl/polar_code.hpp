#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "polarrl/bits.hpp"
#include "polarrl/crc.hpp"

namespace polarrl {

/// Static description of a CRC-concatenated polar code P(N, K).
///
/// K counts the CRC bits: the K-bit information word is the payload
/// followed by r = crc().degree() parity bits, and it is carried on the
/// info_set positions of the message word in ascending index order.
class PolarCode {
 public:
  /// Selects the K most reliable indices below N from `reliability_order`,
  /// which lists bit indices from least to most reliable (the 38.212
  /// convention). Entries >= N are skipped, so a longer mother sequence can
  /// be passed directly.
  static PolarCode from_reliability(int n, int K, std::span<const unsigned> reliability_order,
                                    const CrcPolynomial& crc);

  /// Uses `frozen` verbatim as the frozen set; K = N - |frozen|.
  static PolarCode from_frozen_set(int n, std::span<const unsigned> frozen, const CrcPolynomial& crc);

  int stages() const { return n_; }
  int length() const { return 1 << n_; }
  int info_length() const { return static_cast<int>(info_set_.size()); }
  int crc_length() const { return static_cast<int>(crc_.degree()); }
  int payload_length() const { return info_length() - crc_length(); }

  const CrcPolynomial& crc() const { return crc_; }
  const std::vector<unsigned>& info_set() const { return info_set_; }
  const std::vector<unsigned>& frozen_set() const { return frozen_set_; }
  /// frozen_mask()[i] == 1 iff i is frozen.
  const BitVec& frozen_mask() const { return frozen_mask_; }

  bool operator==(const PolarCode&) const = default;

 private:
  PolarCode(int n, BitVec frozen_mask, const CrcPolynomial& crc);

  int n_;
  BitVec frozen_mask_;
  std::vector<unsigned> info_set_;
  std::vector<unsigned> frozen_set_;
  CrcPolynomial crc_;
};

/// Q_0^1023 of 3GPP TS 38.212 Table 5.3.1.2-1, least reliable first.
std::span<const unsigned> nr_reliability_sequence();

/// Reads whitespace/comma separated non-negative integers; '#' starts a comment.
std::vector<unsigned> read_index_file(const std::filesystem::path& path);

/// Convenience: P(2^n, K) from the built-in 5G sequence with the 5G CRC-16.
PolarCode build_nr_code(int n, int K);

/// In-place x = u G^{(x)n} butterfly; stage s XORs index i+2^s into i.
void polar_transform(std::span<Bit> bits);

/// x = u G^{(x)n}. Throws if u has a 1 on a frozen position.
BitVec encode(std::span<const Bit> message, const PolarCode& code);

/// Payload followed by the r CRC bits.
BitVec crc_attach(std::span<const Bit> payload, const PolarCode& code);
bool crc_verify(std::span<const Bit> info_word, const PolarCode& code);

/// Scatters a K-bit information word onto the info_set; frozen bits are 0.
BitVec embed_info_word(std::span<const Bit> info_word, const PolarCode& code);
/// Gathers the info_set positions of a length-N vector.
BitVec extract_info_word(std::span<const Bit> message, const PolarCode& code);

}  // namespace polarrl
