#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "polarrl/bits.hpp"
#include "polarrl/polar_code.hpp"
#include "polarrl/rng.hpp"

namespace polarrl {

/// Which rate converts Eb/N0 to a noise variance.
enum class RateConvention {
  code_rate,     // K / N, CRC bits counted as information
  payload_rate,  // (K - r) / N
};

std::string_view to_string(RateConvention rc);
RateConvention parse_rate_convention(std::string_view text);

double rate_of(const PolarCode& code, RateConvention rc);

/// sigma^2 = 1 / (2 R 10^(Eb/N0 / 10)).
double ebn0_to_sigma2(double ebn0_db, double rate);

struct ChannelConfig {
  double ebn0_db = 0.0;
  double rate = 0.5;
  double sigma2 = 1.0;
  std::uint64_t seed = 0;

  static ChannelConfig from_ebn0(double ebn0_db, double rate, std::uint64_t seed);
};

/// BPSK (0 -> +1, 1 -> -1) over AWGN, returning L = 2y / sigma^2.
std::vector<double> transmit(std::span<const Bit> codeword, double sigma2, Rng& rng);

}  // namespace polarrl
