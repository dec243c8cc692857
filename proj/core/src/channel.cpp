#include "polarrl/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/random/normal_distribution.hpp>

namespace polarrl {

std::string_view to_string(RateConvention rc) {
  return rc == RateConvention::code_rate ? "code-rate" : "payload-rate";
}

RateConvention parse_rate_convention(std::string_view text) {
  if (text == "code-rate" || text == "kn") return RateConvention::code_rate;
  if (text == "payload-rate" || text == "payload") return RateConvention::payload_rate;
  throw std::invalid_argument("unknown rate convention '" + std::string(text) + "'");
}

double rate_of(const PolarCode& code, RateConvention rc) {
  int const bits = rc == RateConvention::code_rate ? code.info_length() : code.payload_length();
  return static_cast<double>(bits) / code.length();
}

double ebn0_to_sigma2(double ebn0_db, double rate) {
  if (!(rate > 0.0) || rate > 1.0) throw std::invalid_argument("rate must lie in (0, 1]");
  if (!std::isfinite(ebn0_db)) throw std::invalid_argument("Eb/N0 must be finite");
  return 1.0 / (2.0 * rate * std::pow(10.0, ebn0_db / 10.0));
}

ChannelConfig ChannelConfig::from_ebn0(double ebn0_db, double rate, std::uint64_t seed) {
  return ChannelConfig{ebn0_db, rate, ebn0_to_sigma2(ebn0_db, rate), seed};
}

std::vector<double> transmit(std::span<const Bit> codeword, double sigma2, Rng& rng) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) throw std::invalid_argument("sigma^2 must be positive");
  boost::random::normal_distribution<double> noise(0.0, std::sqrt(sigma2));
  std::vector<double> llr(codeword.size());
  double const scale = 2.0 / sigma2;
  for (std::size_t i = 0; i < codeword.size(); ++i) {
    double const y = (codeword[i] ? -1.0 : 1.0) + noise(rng);
    llr[i] = scale * y;
  }
  return llr;
}

}  // namespace polarrl
