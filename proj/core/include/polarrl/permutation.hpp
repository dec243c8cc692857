#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polarrl/rng.hpp"

namespace polarrl {

/// Maps index i to tau(i) by moving binary digit j of i to position
/// stage_order[j]. Stage s of the polar graph couples indices that differ
/// in digit s, so this is the index relabelling that turns the graph whose
/// layer l holds stage stage_order[l] back into the natural graph.
std::vector<unsigned> derive_bit_index_map(std::span<const int> stage_order);

/// out[map[i]] = v[i].
template <class T>
std::vector<T> apply(std::span<const unsigned> map, std::span<const T> v);

/// out[i] = v[map[i]]; the inverse of apply() for the same map.
template <class T>
std::vector<T> apply_inverse(std::span<const unsigned> map, std::span<const T> v);

/// An ordering of the n processing-element stages of the polar factor graph
/// together with its bit-index map. Immutable.
class StagePermutation {
 public:
  static StagePermutation identity(int n);
  /// Throws unless stage_order is a permutation of {0, ..., n-1}.
  explicit StagePermutation(std::vector<int> stage_order, int id = 0);

  int stages() const { return static_cast<int>(stage_order_.size()); }
  int id() const { return id_; }
  const std::vector<int>& stage_order() const { return stage_order_; }
  const std::vector<unsigned>& bit_index_map() const { return map_; }
  bool is_identity() const;

  StagePermutation with_id(int id) const;
  StagePermutation inverse() const;
  /// (this o other)(j) = this(other(j)).
  StagePermutation compose(const StagePermutation& other) const;

  /// Comma-separated digits, e.g. "0,2,1".
  std::string to_string() const;
  static StagePermutation parse(std::string_view text, int id = 0);

  /// Compares stage orders only; the label is not part of the identity.
  bool operator==(const StagePermutation& other) const { return stage_order_ == other.stage_order_; }

 private:
  std::vector<int> stage_order_;
  std::vector<unsigned> map_;
  int id_;
};

/// Uniform over the n! stage orders (n! - 1 with exclude_identity), by
/// Fisher-Yates with rejection of the identity.
StagePermutation random_stage_permutation(int n, Rng& rng, bool exclude_identity);

/// The n cyclic rotations of (0, ..., n-1); rotation r is (r, r+1, ...).
std::vector<StagePermutation> cyclic_shift_set(int n);

extern template std::vector<double> apply(std::span<const unsigned>, std::span<const double>);
extern template std::vector<float> apply(std::span<const unsigned>, std::span<const float>);
extern template std::vector<unsigned> apply(std::span<const unsigned>, std::span<const unsigned>);
extern template std::vector<unsigned char> apply(std::span<const unsigned>, std::span<const unsigned char>);
extern template std::vector<double> apply_inverse(std::span<const unsigned>, std::span<const double>);
extern template std::vector<float> apply_inverse(std::span<const unsigned>, std::span<const float>);
extern template std::vector<unsigned> apply_inverse(std::span<const unsigned>, std::span<const unsigned>);
extern template std::vector<unsigned char> apply_inverse(std::span<const unsigned>, std::span<const unsigned char>);

}  // namespace polarrl
