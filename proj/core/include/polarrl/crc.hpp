#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polarrl/bits.hpp"

namespace polarrl {

/// Binary generator polynomial g(D) of degree r, 1 <= r <= 63.
///
/// Bit d of `coefficients` holds the coefficient of D^d, so the leading
/// term D^r is always set and the constant term is required to be 1.
class CrcPolynomial {
 public:
  explicit CrcPolynomial(std::uint64_t coefficients);

  /// D^16 + D^12 + D^5 + 1, the 16-bit CRC of 3GPP TS 38.212.
  static CrcPolynomial nr_crc16();

  /// Parses a list of exponents such as "16,12,5,0".
  static CrcPolynomial parse(std::string_view exponents);

  unsigned degree() const { return degree_; }
  std::uint64_t coefficients() const { return coefficients_; }
  std::string to_string() const;

  bool operator==(const CrcPolynomial&) const = default;

 private:
  std::uint64_t coefficients_;
  unsigned degree_;
};

/// Remainder of bits(D) * D^r modulo g(D). The first element of `bits` is
/// the highest-order coefficient. Bit j of the result is the coefficient of
/// D^(r-1-j), i.e. the result is the r parity bits in transmission order.
BitVec crc_remainder(std::span<const Bit> bits, const CrcPolynomial& poly);

/// Remainder of word(D) modulo g(D), in the same bit order.
BitVec crc_syndrome(std::span<const Bit> word, const CrcPolynomial& poly);

/// Parity-check matrix H (r rows of length `word_length`) of the code
/// { w : g(D) divides w(D) }. Column j holds D^(L-1-j) mod g(D), hence
/// H * w = 0 over GF(2) iff the word passes the CRC.
std::vector<BitVec> crc_parity_check_matrix(std::size_t word_length, const CrcPolynomial& poly);

}  // namespace polarrl
