#include "lobench/bitstring.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>

#include "lobench/errors.hpp"

namespace lobench {

Instance Instance::canonical(int n) {
  if (n < 1) throw_error(ErrorCode::invalid_argument, "instance dimension must be >= 1");
  Instance inst;
  inst.n = n;
  inst.target.assign(static_cast<std::size_t>(n), 1);
  inst.perm.resize(static_cast<std::size_t>(n));
  std::iota(inst.perm.begin(), inst.perm.end(), 0);
  return inst;
}

Instance Instance::random(int n, Rng& rng) {
  Instance inst = canonical(n);
  for (auto& b : inst.target) b = rng.coin() ? 1 : 0;
  // Fisher-Yates shuffle; uniform over all permutations.
  for (int i = n - 1; i > 0; --i) {
    int j = rng.uniform_int(0, i);
    std::swap(inst.perm[static_cast<std::size_t>(i)], inst.perm[static_cast<std::size_t>(j)]);
  }
  return inst;
}

bool Instance::is_canonical() const {
  for (int j = 0; j < n; ++j) {
    if (perm[static_cast<std::size_t>(j)] != j) return false;
    if (target[static_cast<std::size_t>(j)] != 1) return false;
  }
  return true;
}

BitString random_bitstring(int n, Rng& rng) {
  BitString x(static_cast<std::size_t>(n));
  for (auto& b : x) b = rng.coin() ? 1 : 0;
  return x;
}

int leading_ones(const BitString& x) {
  int i = 0;
  const int n = static_cast<int>(x.size());
  while (i < n && x[static_cast<std::size_t>(i)] == 1) ++i;
  return i;
}

int leading_ones(const BitString& x, const Instance& inst) {
  if (static_cast<int>(x.size()) != inst.n)
    throw_error(ErrorCode::invalid_argument, "bit string length does not match instance dimension");
  int i = 0;
  while (i < inst.n) {
    const int pos = inst.perm[static_cast<std::size_t>(i)];
    if (x[static_cast<std::size_t>(pos)] != inst.target[static_cast<std::size_t>(pos)]) break;
    ++i;
  }
  return i;
}

BitString flip_radius(const BitString& x, int r, Rng& rng) {
  const int n = static_cast<int>(x.size());
  if (r < 0 || r > n)
    throw_error(ErrorCode::invalid_argument,
                "invalid radius " + std::to_string(r) + " for dimension " + std::to_string(n));
  BitString y = x;
  SubsetSampler sampler(n);
  std::vector<int> positions;
  sampler.sample(r, rng, positions);
  for (int pos : positions) y[static_cast<std::size_t>(pos)] ^= 1u;
  return y;
}

SubsetSampler::SubsetSampler(int n) : index_(static_cast<std::size_t>(n)) {
  std::iota(index_.begin(), index_.end(), 0);
}

void SubsetSampler::sample(int r, Rng& rng, std::vector<int>& out) {
  const int n = static_cast<int>(index_.size());
  if (r < 0 || r > n)
    throw_error(ErrorCode::invalid_argument,
                "invalid radius " + std::to_string(r) + " for dimension " + std::to_string(n));
  out.resize(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) {
    const int j = rng.uniform_int(i, n - 1);
    std::swap(index_[static_cast<std::size_t>(i)], index_[static_cast<std::size_t>(j)]);
    out[static_cast<std::size_t>(i)] = index_[static_cast<std::size_t>(i)];
  }
}

}  // namespace lobench
