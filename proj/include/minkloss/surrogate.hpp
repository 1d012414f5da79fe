#pragma once

#include <cstdint>
#include <vector>

#include "minkloss/losses.hpp"
#include "minkloss/sampling.hpp"

namespace minkloss {

// Loss ordering at a point: permutation[r] is the component holding rank r
// (rank 0 = smallest loss). Equal losses keep index order.
struct OrderedLossProfile {
  std::vector<int> permutation;
  std::vector<double> sorted_losses;
};

OrderedLossProfile ordering(const Dataset& dataset, const Vec& w);

// FNV-1a hash of the clean/outlier pattern of the permutation; changes exactly
// when a clean and an outlier loss swap ranks along a scan.
std::uint64_t ordering_signature(const Dataset& dataset,
                                 const OrderedLossProfile& profile);

// probs[r] are all clean for r < n - |outliers|, i.e. the point lies in the
// basin where every clean loss sits below every outlier loss.
bool top_ranks_clean(const Dataset& dataset, const OrderedLossProfile& profile);

// Selection probability of each component at w: rank probabilities routed
// through the current ordering. Indexed by component.
std::vector<double> component_probabilities(const Dataset& dataset,
                                            const Vec& w,
                                            const SelectionScheme& scheme);

// Expected update direction sum_r p_r grad f_{perm(r)}(w): the gradient of
// the (non-convex) surrogate loss the selection rule implicitly descends.
Vec surrogate_gradient(const Dataset& dataset, const Vec& w,
                       const SelectionScheme& scheme);

// Expected selected loss sum_r p_r f_{perm(r)}(w). On any region with fixed
// ordering its gradient equals surrogate_gradient.
double surrogate_value(const Dataset& dataset, const Vec& w,
                       const SelectionScheme& scheme);

struct StationaryReport {
  Vec point;
  double surrogate_gradient_norm = 0.0;
  bool converged = false;
  int iterations = 0;
  OrderedLossProfile ordering_at_point;
  bool top_ranks_clean = false;
};

// Deterministic descent on the expected update, w <- w - eta grad, with
// eta = 1 / (2 sup_i L_i), until the surrogate gradient norm reaches tol.
// tol = 0 picks 1e-10 (exact-gradient kinds) or 1e-7 (logistic datasets).
// Non-convergence is reported, not thrown.
StationaryReport find_stationary_point(const Dataset& dataset, const Vec& w0,
                                       const SelectionScheme& scheme,
                                       double tol = 0.0,
                                       int max_iters = 1000000);

struct ScanRow {
  double t = 0.0;
  double value = 0.0;
  double directional_derivative = 0.0;
  std::uint64_t signature = 0;
};

// Samples w(t) = (1-t) a + t b on a uniform grid. The directional derivative
// is grad_surrogate . (b - a) / ||b - a||.
std::vector<ScanRow> scan_line(const Dataset& dataset, const Vec& a,
                               const Vec& b, int grid_points,
                               const SelectionScheme& scheme);

}  // namespace minkloss
