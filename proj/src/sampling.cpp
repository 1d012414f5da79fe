#include "minkloss/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "minkloss/errors.hpp"

namespace minkloss {

int SelectionScheme::batch_size() const {
  return static_cast<int>(std::ceil(batch_fraction * k - 1e-9));
}

void SelectionScheme::validate(int n) const {
  if (n < 1) throw InvalidInput("selection: need at least one sample");
  if (k < 1) throw InvalidInput("selection: k must be at least 1");
  if (order_index < 1 || order_index > k)
    throw InvalidInput("selection: order_index must lie in [1, k]");
  if (!(batch_fraction > 0.0) || batch_fraction > 1.0)
    throw InvalidInput("selection: batch_fraction must lie in (0, 1]");
  if (!with_replacement && k > n)
    throw InvalidInput("selection: k exceeds n under without-replacement");
}

namespace {

long double int_pow(long double base, int exp) {
  long double r = 1.0L;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace

RankDistribution rank_probabilities(int n, const SelectionScheme& scheme) {
  if (n < 1) throw InvalidInput("rank_probabilities: n must be at least 1");
  if (scheme.order_index != 1)
    throw UnsupportedClosedForm(
        "rank_probabilities: no closed form for order_index > 1; "
        "use empirical frequencies");
  if (scheme.k < 1) throw InvalidInput("rank_probabilities: k must be >= 1");
  if (!scheme.with_replacement && scheme.k > n)
    throw InvalidInput("rank_probabilities: k exceeds n without replacement");

  const int k = scheme.k;
  RankDistribution dist;
  dist.probs.resize(n);

  if (scheme.with_replacement) {
    // Shared powers make the sum telescope to n^k.
    std::vector<long double> pow_table(n + 1);
    for (int j = 0; j <= n; ++j)
      pow_table[j] = int_pow(static_cast<long double>(j), k);
    const long double denom = pow_table[n];
    for (int i = 1; i <= n; ++i)
      dist.probs[i - 1] =
          static_cast<double>((pow_table[n - i + 1] - pow_table[n - i]) / denom);
  } else {
    // q_i = C(n-i, k-1), computed by the ratio recurrence, then normalized.
    std::vector<long double> q(n, 0.0L);
    long double c = 1.0L;  // C(n-1, k-1)
    for (int j = 0; j < k - 1; ++j)
      c *= static_cast<long double>(n - 1 - j) / static_cast<long double>(j + 1);
    long double sum = 0.0L;
    for (int i = 1; i <= n; ++i) {
      if (n - i >= k - 1) {
        q[i - 1] = c;
        sum += c;
        c *= static_cast<long double>(n - i - k + 1) /
             static_cast<long double>(n - i);
      }
    }
    for (int i = 0; i < n; ++i)
      dist.probs[i] = static_cast<double>(q[i] / sum);
  }
  return dist;
}

std::vector<int> draw_indices(int n, const SelectionScheme& scheme, Rng& rng) {
  scheme.validate(n);
  std::vector<int> drawn;
  drawn.reserve(scheme.k);
  if (scheme.with_replacement) {
    for (int j = 0; j < scheme.k; ++j) drawn.push_back(rng.index(n));
  } else {
    std::unordered_set<int> seen;
    for (int j = n - scheme.k; j < n; ++j) {
      const int t = rng.index(j + 1);
      if (seen.insert(t).second) {
        drawn.push_back(t);
      } else {
        seen.insert(j);
        drawn.push_back(j);
      }
    }
  }
  return drawn;
}

namespace {

std::vector<int> sorted_positions(const std::vector<int>& drawn,
                                  const std::vector<double>& losses) {
  std::vector<int> pos(drawn.size());
  for (size_t j = 0; j < pos.size(); ++j) pos[j] = static_cast<int>(j);
  std::sort(pos.begin(), pos.end(), [&](int a, int b) {
    if (losses[a] != losses[b]) return losses[a] < losses[b];
    return drawn[a] < drawn[b];
  });
  return pos;
}

}  // namespace

int pick_by_order(const std::vector<int>& drawn,
                  const std::vector<double>& losses, int order_index) {
  if (drawn.empty()) throw InvalidInput("pick_by_order: empty draw");
  if (drawn.size() != losses.size())
    throw InvalidInput("pick_by_order: size mismatch");
  if (order_index < 1 || order_index > static_cast<int>(drawn.size()))
    throw InvalidInput("pick_by_order: order_index out of range");
  const auto pos = sorted_positions(drawn, losses);
  return drawn[pos[order_index - 1]];
}

std::vector<int> lowest_by_loss(const std::vector<int>& drawn,
                                const std::vector<double>& losses, int m) {
  if (drawn.size() != losses.size())
    throw InvalidInput("lowest_by_loss: size mismatch");
  if (m < 1 || m > static_cast<int>(drawn.size()))
    throw InvalidInput("lowest_by_loss: bad keep count");
  const auto pos = sorted_positions(drawn, losses);
  std::vector<int> kept(m);
  for (int j = 0; j < m; ++j) kept[j] = drawn[pos[j]];
  std::sort(kept.begin(), kept.end());
  return kept;
}

int select_index(const std::vector<double>& losses,
                 const SelectionScheme& scheme, Rng& rng) {
  const int n = static_cast<int>(losses.size());
  if (n == 0) throw InvalidInput("select_index: empty losses");
  const auto drawn = draw_indices(n, scheme, rng);
  std::vector<double> drawn_losses(drawn.size());
  for (size_t j = 0; j < drawn.size(); ++j) drawn_losses[j] = losses[drawn[j]];
  return pick_by_order(drawn, drawn_losses, scheme.order_index);
}

std::vector<int> select_batch(const std::vector<double>& losses,
                              const SelectionScheme& scheme, Rng& rng) {
  const int n = static_cast<int>(losses.size());
  if (n == 0) throw InvalidInput("select_batch: empty losses");
  // The batch draw is always without replacement within a step.
  SelectionScheme draw_scheme = scheme;
  draw_scheme.with_replacement = false;
  draw_scheme.validate(n);
  const int m = scheme.batch_size();
  if (m < 1) throw InvalidInput("select_batch: batch_fraction * k below 1");
  const auto drawn = draw_indices(n, draw_scheme, rng);
  std::vector<double> drawn_losses(drawn.size());
  for (size_t j = 0; j < drawn.size(); ++j) drawn_losses[j] = losses[drawn[j]];
  return lowest_by_loss(drawn, drawn_losses, m);
}

}  // namespace minkloss
