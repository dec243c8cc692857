#include "polarrl/polar_code.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace polarrl {

namespace {

void check_stages(int n) {
  if (n < 1 || n > 20) {
    throw std::invalid_argument("polar code needs 1 <= n <= 20, got n=" + std::to_string(n));
  }
}

}  // namespace

PolarCode::PolarCode(int n, BitVec frozen_mask, const CrcPolynomial& crc)
    : n_(n), frozen_mask_(std::move(frozen_mask)), crc_(crc) {
  for (unsigned i = 0; i < frozen_mask_.size(); ++i) {
    (frozen_mask_[i] ? frozen_set_ : info_set_).push_back(i);
  }
  if (info_set_.empty()) throw std::invalid_argument("polar code needs K >= 1");
  if (crc_.degree() >= info_set_.size()) {
    throw std::invalid_argument("CRC degree " + std::to_string(crc_.degree()) +
                                " must be smaller than K=" + std::to_string(info_set_.size()));
  }
}

PolarCode PolarCode::from_reliability(int n, int K, std::span<const unsigned> reliability_order,
                                      const CrcPolynomial& crc) {
  check_stages(n);
  unsigned const N = 1U << n;
  if (K <= 0 || static_cast<unsigned>(K) >= N) {
    throw std::invalid_argument("need 0 < K < N, got K=" + std::to_string(K));
  }
  std::vector<unsigned> order;
  order.reserve(N);
  BitVec seen(N, 0);
  for (unsigned idx : reliability_order) {
    if (idx >= N) continue;
    if (seen[idx]) throw std::invalid_argument("reliability order repeats index " + std::to_string(idx));
    seen[idx] = 1;
    order.push_back(idx);
  }
  if (order.size() < N) {
    throw std::invalid_argument("reliability order covers only " + std::to_string(order.size()) +
                                " of N=" + std::to_string(N) + " indices");
  }
  BitVec frozen(N, 1);
  for (unsigned j = N - static_cast<unsigned>(K); j < N; ++j) frozen[order[j]] = 0;
  return PolarCode(n, std::move(frozen), crc);
}

PolarCode PolarCode::from_frozen_set(int n, std::span<const unsigned> frozen_indices, const CrcPolynomial& crc) {
  check_stages(n);
  unsigned const N = 1U << n;
  BitVec frozen(N, 0);
  for (unsigned idx : frozen_indices) {
    if (idx >= N) throw std::invalid_argument("frozen index " + std::to_string(idx) + " out of range");
    if (frozen[idx]) throw std::invalid_argument("frozen index " + std::to_string(idx) + " repeated");
    frozen[idx] = 1;
  }
  return PolarCode(n, std::move(frozen), crc);
}

std::vector<unsigned> read_index_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open index file " + path.string());
  std::vector<unsigned> out;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    long long value = 0;
    while (fields >> value) {
      if (value < 0) throw std::runtime_error("negative index in " + path.string());
      out.push_back(static_cast<unsigned>(value));
    }
    if (!fields.eof()) throw std::runtime_error("non-numeric entry in " + path.string());
  }
  return out;
}

PolarCode build_nr_code(int n, int K) {
  return PolarCode::from_reliability(n, K, nr_reliability_sequence(), CrcPolynomial::nr_crc16());
}

void polar_transform(std::span<Bit> bits) {
  std::size_t const N = bits.size();
  for (std::size_t half = 1; half < N; half <<= 1) {
    for (std::size_t block = 0; block < N; block += 2 * half) {
      for (std::size_t i = block; i < block + half; ++i) bits[i] ^= bits[i + half];
    }
  }
}

BitVec encode(std::span<const Bit> message, const PolarCode& code) {
  if (message.size() != static_cast<std::size_t>(code.length())) {
    throw std::invalid_argument("message length does not match N");
  }
  for (unsigned idx : code.frozen_set()) {
    if (message[idx]) throw std::invalid_argument("message has a 1 on frozen index " + std::to_string(idx));
  }
  BitVec x(message.begin(), message.end());
  polar_transform(x);
  return x;
}

BitVec crc_attach(std::span<const Bit> payload, const PolarCode& code) {
  if (payload.size() != static_cast<std::size_t>(code.payload_length())) {
    throw std::invalid_argument("payload length " + std::to_string(payload.size()) + " != K - r = " +
                                std::to_string(code.payload_length()));
  }
  BitVec word(payload.begin(), payload.end());
  BitVec const parity = crc_remainder(payload, code.crc());
  word.insert(word.end(), parity.begin(), parity.end());
  return word;
}

bool crc_verify(std::span<const Bit> info_word, const PolarCode& code) {
  if (info_word.size() != static_cast<std::size_t>(code.info_length())) {
    throw std::invalid_argument("information word length != K");
  }
  BitVec const syndrome = crc_syndrome(info_word, code.crc());
  return std::all_of(syndrome.begin(), syndrome.end(), [](Bit b) { return b == 0; });
}

BitVec embed_info_word(std::span<const Bit> info_word, const PolarCode& code) {
  if (info_word.size() != static_cast<std::size_t>(code.info_length())) {
    throw std::invalid_argument("information word length != K");
  }
  BitVec u(code.length(), 0);
  auto const& info = code.info_set();
  for (std::size_t k = 0; k < info.size(); ++k) u[info[k]] = info_word[k];
  return u;
}

BitVec extract_info_word(std::span<const Bit> message, const PolarCode& code) {
  if (message.size() != static_cast<std::size_t>(code.length())) {
    throw std::invalid_argument("message length does not match N");
  }
  BitVec out;
  out.reserve(code.info_set().size());
  for (unsigned idx : code.info_set()) out.push_back(message[idx]);
  return out;
}

}  // namespace polarrl
