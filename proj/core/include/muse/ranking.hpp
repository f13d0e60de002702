#pragma once

#include <cstddef>
#include <vector>

#include "muse/types.hpp"

namespace muse {

struct RankWeights {
  double surprise = 1.0;
  double pleasantness = 1.0;
  double pairing = 1.0;
};

struct ScoredCandidate {
  Recipe recipe;
  double surprise = 0.0;
  double pleasantness = 0.0;
  double pairing = 0.0;
  double composite = 0.0;
  std::size_t composite_rank = 0;  // 1-based
};

/// Min-max normalizes each metric over the set (a constant metric maps to 0.5),
/// sums with `weights`, sorts descending with ties broken by recipe id, and
/// assigns ranks 1..n. Throws InvalidArgument on an empty set or bad weights.
std::vector<ScoredCandidate> rank_candidates(std::vector<ScoredCandidate> candidates, const RankWeights& weights);

}  // namespace muse
