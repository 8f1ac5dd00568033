#pragma once

#include <cstdint>
#include <vector>

#include "lobench/rng.hpp"

namespace lobench {

/// Fixed-length 0/1 sequence. Element i is position i+1 of the search space.
using BitString = std::vector<std::uint8_t>;

/// A prefix-agreement instance: hidden target string and a permutation that
/// decides in which order positions are inspected. The canonical instance
/// (all-ones target, identity permutation) is the plain prefix-counting
/// problem whose unique optimum is the all-ones string.
struct Instance {
  int n = 0;
  BitString target;        // z
  std::vector<int> perm;   // sigma, 0-based: prefix slot j inspects position perm[j]

  static Instance canonical(int n);
  static Instance random(int n, Rng& rng);

  bool is_canonical() const;
};

BitString random_bitstring(int n, Rng& rng);

/// Length of the maximal all-ones prefix of x.
int leading_ones(const BitString& x);

/// Prefix-agreement length of x against inst.target under inst.perm.
/// Coincides with leading_ones(x) on the canonical instance.
int leading_ones(const BitString& x, const Instance& inst);

/// Copy of x with exactly r pairwise distinct positions inverted, the set
/// drawn uniformly at random among all r-subsets of the index range.
/// Throws ErrorCode::invalid_argument unless 0 <= r <= n.
BitString flip_radius(const BitString& x, int r, Rng& rng);

/// Uniform r-subset sampler over [0..n-1]. O(r) per draw: a partial
/// Fisher-Yates pass over a persistent index permutation, which stays a
/// permutation between calls, so every prefix drawn is uniform.
class SubsetSampler {
 public:
  explicit SubsetSampler(int n);

  /// Writes r distinct positions into out (resized to r).
  void sample(int r, Rng& rng, std::vector<int>& out);

  int n() const { return static_cast<int>(index_.size()); }

 private:
  std::vector<int> index_;
};

}  // namespace lobench
