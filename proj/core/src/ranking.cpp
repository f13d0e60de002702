#include "muse/ranking.hpp"

#include <algorithm>
#include <cmath>

#include "muse/error.hpp"

namespace muse {

namespace {

template <class Get>
std::vector<double> normalized(const std::vector<ScoredCandidate>& cs, Get get) {
  double lo = get(cs.front());
  double hi = lo;
  for (const auto& c : cs) {
    lo = std::min(lo, get(c));
    hi = std::max(hi, get(c));
  }
  std::vector<double> out;
  out.reserve(cs.size());
  for (const auto& c : cs) out.push_back(hi > lo ? (get(c) - lo) / (hi - lo) : 0.5);
  return out;
}

}  // namespace

std::vector<ScoredCandidate> rank_candidates(std::vector<ScoredCandidate> candidates, const RankWeights& weights) {
  if (candidates.empty()) throw InvalidArgument("rank_candidates: empty candidate set");
  for (double w : {weights.surprise, weights.pleasantness, weights.pairing})
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidArgument("rank_candidates: weights must be finite and >= 0");
  if (weights.surprise + weights.pleasantness + weights.pairing <= 0.0)
    throw InvalidArgument("rank_candidates: weights are all zero");

  auto s = normalized(candidates, [](const ScoredCandidate& c) { return c.surprise; });
  auto p = normalized(candidates, [](const ScoredCandidate& c) { return c.pleasantness; });
  auto q = normalized(candidates, [](const ScoredCandidate& c) { return c.pairing; });
  for (std::size_t i = 0; i < candidates.size(); ++i)
    candidates[i].composite = weights.surprise * s[i] + weights.pleasantness * p[i] + weights.pairing * q[i];

  std::sort(candidates.begin(), candidates.end(), [](const ScoredCandidate& a, const ScoredCandidate& b) {
    if (a.composite != b.composite) return a.composite > b.composite;
    return a.recipe.id < b.recipe.id;
  });
  for (std::size_t i = 0; i < candidates.size(); ++i) candidates[i].composite_rank = i + 1;
  return candidates;
}

}  // namespace muse
