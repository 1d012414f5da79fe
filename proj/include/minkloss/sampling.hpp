#pragma once

#include <vector>

#include "minkloss/rng.hpp"

namespace minkloss {

// How one update sample is chosen: draw k, keep the order_index-th smallest
// loss (order_index 1 = min-loss, ceil(k/2) = median-loss). batch_fraction = 1
// means single-pick semantics; below 1 the lowest ceil(alpha k) of the k drawn
// are kept and their gradients averaged.
struct SelectionScheme {
  int k = 2;
  bool with_replacement = true;
  int order_index = 1;
  double batch_fraction = 1.0;

  int batch_size() const;  // ceil(batch_fraction * k)
  void validate(int n) const;
};

inline SelectionScheme min_k_scheme(int k, bool with_replacement = true) {
  return SelectionScheme{k, with_replacement, 1, 1.0};
}
inline SelectionScheme median_loss_scheme(int k, bool with_replacement = true) {
  return SelectionScheme{k, with_replacement, (k + 1) / 2, 1.0};
}
inline SelectionScheme batched_scheme(int k, double alpha) {
  return SelectionScheme{k, true, 1, alpha};
}

// Probability that the sample with the i-th smallest current loss is the one
// picked; probs[0] is rank 1. Closed form exists for order_index = 1 only:
//   with replacement     ((n-i+1)^k - (n-i)^k) / n^k
//   without replacement  C(n-i, k-1) / C(n, k)
struct RankDistribution {
  std::vector<double> probs;
};

RankDistribution rank_probabilities(int n, const SelectionScheme& scheme);

// k draws from [0, n): i.i.d. when with_replacement, otherwise a uniform
// k-subset (Floyd's algorithm).
std::vector<int> draw_indices(int n, const SelectionScheme& scheme, Rng& rng);

// Among drawn positions, the index whose loss is the order_index-th smallest.
// losses[j] belongs to drawn[j]; ties resolve to the smallest original index.
int pick_by_order(const std::vector<int>& drawn,
                  const std::vector<double>& losses, int order_index);

// The m drawn indices with smallest losses, ascending. Same tie rule.
std::vector<int> lowest_by_loss(const std::vector<int>& drawn,
                                const std::vector<double>& losses, int m);

int select_index(const std::vector<double>& losses,
                 const SelectionScheme& scheme, Rng& rng);

// Batched variant: the ceil(alpha k) indices with smallest losses among k
// drawn without replacement (one draw per step), ascending.
std::vector<int> select_batch(const std::vector<double>& losses,
                              const SelectionScheme& scheme, Rng& rng);

}  // namespace minkloss
