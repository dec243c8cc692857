#include "polarrl/permutation.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <stdexcept>

#include <boost/random/uniform_int_distribution.hpp>

namespace polarrl {

namespace {

void validate_order(std::span<const int> order) {
  int const n = static_cast<int>(order.size());
  if (n < 1 || n > 20) throw std::invalid_argument("stage permutation needs 1 <= n <= 20");
  std::vector<char> seen(n, 0);
  for (int s : order) {
    if (s < 0 || s >= n || seen[s]) throw std::invalid_argument("malformed stage permutation");
    seen[s] = 1;
  }
}

}  // namespace

std::vector<unsigned> derive_bit_index_map(std::span<const int> stage_order) {
  validate_order(stage_order);
  unsigned const n = static_cast<unsigned>(stage_order.size());
  unsigned const N = 1U << n;
  std::vector<unsigned> map(N);
  for (unsigned i = 0; i < N; ++i) {
    unsigned t = 0;
    for (unsigned j = 0; j < n; ++j) t |= ((i >> j) & 1U) << stage_order[j];
    map[i] = t;
  }
  return map;
}

template <class T>
std::vector<T> apply(std::span<const unsigned> map, std::span<const T> v) {
  if (map.size() != v.size()) throw std::invalid_argument("permutation length mismatch");
  std::vector<T> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[map[i]] = v[i];
  return out;
}

template <class T>
std::vector<T> apply_inverse(std::span<const unsigned> map, std::span<const T> v) {
  if (map.size() != v.size()) throw std::invalid_argument("permutation length mismatch");
  std::vector<T> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[map[i]];
  return out;
}

template std::vector<double> apply(std::span<const unsigned>, std::span<const double>);
template std::vector<float> apply(std::span<const unsigned>, std::span<const float>);
template std::vector<unsigned> apply(std::span<const unsigned>, std::span<const unsigned>);
template std::vector<unsigned char> apply(std::span<const unsigned>, std::span<const unsigned char>);
template std::vector<double> apply_inverse(std::span<const unsigned>, std::span<const double>);
template std::vector<float> apply_inverse(std::span<const unsigned>, std::span<const float>);
template std::vector<unsigned> apply_inverse(std::span<const unsigned>, std::span<const unsigned>);
template std::vector<unsigned char> apply_inverse(std::span<const unsigned>, std::span<const unsigned char>);

StagePermutation StagePermutation::identity(int n) {
  std::vector<int> order(static_cast<std::size_t>(std::max(n, 0)));
  std::iota(order.begin(), order.end(), 0);
  return StagePermutation(std::move(order), 0);
}

StagePermutation::StagePermutation(std::vector<int> stage_order, int id)
    : stage_order_(std::move(stage_order)), map_(derive_bit_index_map(stage_order_)), id_(id) {}

bool StagePermutation::is_identity() const {
  for (std::size_t j = 0; j < stage_order_.size(); ++j) {
    if (stage_order_[j] != static_cast<int>(j)) return false;
  }
  return true;
}

StagePermutation StagePermutation::with_id(int id) const {
  StagePermutation copy = *this;
  copy.id_ = id;
  return copy;
}

StagePermutation StagePermutation::inverse() const {
  std::vector<int> inv(stage_order_.size());
  for (std::size_t j = 0; j < stage_order_.size(); ++j) inv[stage_order_[j]] = static_cast<int>(j);
  return StagePermutation(std::move(inv), id_);
}

StagePermutation StagePermutation::compose(const StagePermutation& other) const {
  if (other.stages() != stages()) throw std::invalid_argument("stage count mismatch");
  std::vector<int> out(stage_order_.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = stage_order_[other.stage_order_[j]];
  return StagePermutation(std::move(out));
}

std::string StagePermutation::to_string() const {
  std::string out;
  for (std::size_t j = 0; j < stage_order_.size(); ++j) {
    if (j) out += ',';
    out += std::to_string(stage_order_[j]);
  }
  return out;
}

StagePermutation StagePermutation::parse(std::string_view text, int id) {
  std::vector<int> order;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto const end = std::min(text.find(',', pos), text.size());
    int value = 0;
    auto const [ptr, ec] = std::from_chars(text.data() + pos, text.data() + end, value);
    if (ec != std::errc{} || ptr != text.data() + end) {
      throw std::invalid_argument("bad stage permutation '" + std::string(text) + "'");
    }
    order.push_back(value);
    pos = end + 1;
  }
  return StagePermutation(std::move(order), id);
}

StagePermutation random_stage_permutation(int n, Rng& rng, bool exclude_identity) {
  if (n < 1) throw std::invalid_argument("random_stage_permutation needs n >= 1");
  if (exclude_identity && n < 2) {
    throw std::invalid_argument("no non-identity stage permutation exists for n < 2");
  }
  std::vector<int> order(n);
  for (;;) {
    std::iota(order.begin(), order.end(), 0);
    for (int i = n - 1; i > 0; --i) {
      boost::random::uniform_int_distribution<int> pick(0, i);
      std::swap(order[i], order[pick(rng)]);
    }
    StagePermutation perm(order);
    if (!exclude_identity || !perm.is_identity()) return perm;
  }
}

std::vector<StagePermutation> cyclic_shift_set(int n) {
  if (n < 1) throw std::invalid_argument("cyclic_shift_set needs n >= 1");
  std::vector<StagePermutation> out;
  out.reserve(n);
  for (int r = 0; r < n; ++r) {
    std::vector<int> order(n);
    for (int j = 0; j < n; ++j) order[j] = (j + r) % n;
    out.emplace_back(std::move(order), r);
  }
  return out;
}

}  // namespace polarrl
