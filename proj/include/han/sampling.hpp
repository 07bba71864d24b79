#ifndef HAN_SAMPLING_HPP
#define HAN_SAMPLING_HPP

#include <han/types.hpp>

namespace han {

struct SampleResult {
  IndexSet indices;
  /// Set when the excluded set already covered the whole universe.
  bool saturated = false;
};

/// Uniform sample of min(b, |universe \ excluded|) indices without
/// replacement from {0..n-1} \ excluded, by a partial Fisher-Yates shuffle
/// over the allowed range. Deterministic per rng state.
inline SampleResult sample_new(std::mt19937_64& rng, Index n, const IndexSet& excluded,
                               Index b) {
  if (n < 0 || b < 0) throw invalid_input("sample_new: negative size");
  excluded.check_bounds(n, "sample_new");
  IndexSet allowed = excluded.complement(n);
  if (allowed.empty()) return SampleResult{IndexSet{}, true};
  std::vector<Index> pool(allowed.begin(), allowed.end());
  const Index take = std::min<Index>(b, static_cast<Index>(pool.size()));
  for (Index i = 0; i < take; ++i) {
    const std::uint64_t span = static_cast<std::uint64_t>(pool.size()) -
                               static_cast<std::uint64_t>(i);
    const Index j = i + static_cast<Index>(uniform_below(rng, span));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  pool.resize(static_cast<std::size_t>(take));
  return SampleResult{IndexSet(std::move(pool)), false};
}

}  // namespace han

#endif  // HAN_SAMPLING_HPP
