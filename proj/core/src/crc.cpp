#include "polarrl/crc.hpp"

#include <bit>
#include <charconv>
#include <stdexcept>

namespace polarrl {

CrcPolynomial::CrcPolynomial(std::uint64_t coefficients) : coefficients_(coefficients), degree_(0) {
  if (coefficients == 0 || (coefficients & 1U) == 0) {
    throw std::invalid_argument("CRC polynomial must have a non-zero constant term");
  }
  degree_ = 63U - static_cast<unsigned>(std::countl_zero(coefficients));
  if (degree_ == 0) {
    throw std::invalid_argument("CRC polynomial must have degree >= 1");
  }
}

CrcPolynomial CrcPolynomial::nr_crc16() {
  return CrcPolynomial((1ULL << 16) | (1ULL << 12) | (1ULL << 5) | 1ULL);
}

CrcPolynomial CrcPolynomial::parse(std::string_view exponents) {
  std::uint64_t coeffs = 0;
  std::size_t pos = 0;
  while (pos < exponents.size()) {
    auto const end = exponents.find(',', pos);
    auto token = exponents.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    unsigned exp = 0;
    auto const [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), exp);
    if (ec != std::errc{} || ptr != token.data() + token.size() || token.empty() || exp > 63) {
      throw std::invalid_argument("bad CRC exponent list: '" + std::string(exponents) + "'");
    }
    coeffs |= 1ULL << exp;
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
  return CrcPolynomial(coeffs);
}

std::string CrcPolynomial::to_string() const {
  std::string out;
  for (int d = static_cast<int>(degree_); d >= 0; --d) {
    if ((coefficients_ >> d) & 1U) {
      if (!out.empty()) out += ',';
      out += std::to_string(d);
    }
  }
  return out;
}

namespace {

// Shift-register division. `reg` holds the running remainder, bit r-1 being
// the coefficient of D^(r-1).
std::uint64_t divide(std::span<const Bit> bits, const CrcPolynomial& poly, bool append_zeros) {
  unsigned const r = poly.degree();
  std::uint64_t const mask = (r == 64) ? ~0ULL : ((1ULL << r) - 1);
  std::uint64_t const low = poly.coefficients() & mask;
  std::uint64_t reg = 0;
  auto push = [&](unsigned bit) {
    bool const top = (reg >> (r - 1)) & 1U;
    reg = ((reg << 1) | bit) & mask;
    if (top) reg ^= low;
  };
  for (Bit b : bits) push(b & 1U);
  if (append_zeros) {
    for (unsigned i = 0; i < r; ++i) push(0);
  }
  return reg;
}

BitVec unpack(std::uint64_t reg, unsigned r) {
  BitVec out(r);
  for (unsigned j = 0; j < r; ++j) out[j] = static_cast<Bit>((reg >> (r - 1 - j)) & 1U);
  return out;
}

}  // namespace

BitVec crc_remainder(std::span<const Bit> bits, const CrcPolynomial& poly) {
  return unpack(divide(bits, poly, true), poly.degree());
}

BitVec crc_syndrome(std::span<const Bit> word, const CrcPolynomial& poly) {
  return unpack(divide(word, poly, false), poly.degree());
}

std::vector<BitVec> crc_parity_check_matrix(std::size_t word_length, const CrcPolynomial& poly) {
  unsigned const r = poly.degree();
  std::vector<BitVec> h(r, BitVec(word_length, 0));
  // Column j is D^(L-1-j) mod g, so walk from the last column upwards
  // multiplying by D each step.
  std::uint64_t const mask = (1ULL << r) - 1;
  std::uint64_t const low = poly.coefficients() & mask;
  std::uint64_t power = 1;  // D^0 mod g
  for (std::size_t col = word_length; col-- > 0;) {
    for (unsigned row = 0; row < r; ++row) {
      h[row][col] = static_cast<Bit>((power >> (r - 1 - row)) & 1U);
    }
    bool const top = (power >> (r - 1)) & 1U;
    power = (power << 1) & mask;
    if (top) power ^= low;
  }
  return h;
}

}  // namespace polarrl
