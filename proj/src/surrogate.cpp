#include "minkloss/surrogate.hpp"

#include <algorithm>
#include <cmath>

#include "minkloss/errors.hpp"

namespace minkloss {

OrderedLossProfile ordering(const Dataset& dataset, const Vec& w) {
  const auto losses = dataset.losses_at(w);
  OrderedLossProfile profile;
  profile.permutation.resize(losses.size());
  for (size_t i = 0; i < losses.size(); ++i)
    profile.permutation[i] = static_cast<int>(i);
  std::stable_sort(profile.permutation.begin(), profile.permutation.end(),
                   [&](int a, int b) { return losses[a] < losses[b]; });
  profile.sorted_losses.resize(losses.size());
  for (size_t r = 0; r < losses.size(); ++r)
    profile.sorted_losses[r] = losses[profile.permutation[r]];
  return profile;
}

std::uint64_t ordering_signature(const Dataset& dataset,
                                 const OrderedLossProfile& profile) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (int idx : profile.permutation) {
    const std::uint64_t byte = dataset.components[idx].is_outlier() ? 1u : 0u;
    h = (h ^ byte) * 0x100000001b3ULL;
  }
  return h;
}

bool top_ranks_clean(const Dataset& dataset,
                     const OrderedLossProfile& profile) {
  const int n_clean = dataset.n() - dataset.outlier_count();
  for (int r = 0; r < n_clean; ++r)
    if (dataset.components[profile.permutation[r]].is_outlier()) return false;
  return true;
}

std::vector<double> component_probabilities(const Dataset& dataset,
                                            const Vec& w,
                                            const SelectionScheme& scheme) {
  const auto profile = ordering(dataset, w);
  const auto dist = rank_probabilities(dataset.n(), scheme);
  std::vector<double> probs(dataset.n(), 0.0);
  for (int r = 0; r < dataset.n(); ++r)
    probs[profile.permutation[r]] = dist.probs[r];
  return probs;
}

Vec surrogate_gradient(const Dataset& dataset, const Vec& w,
                       const SelectionScheme& scheme) {
  if (dataset.components.empty())
    throw InvalidInput("surrogate_gradient: empty dataset");
  const auto profile = ordering(dataset, w);
  const auto dist = rank_probabilities(dataset.n(), scheme);
  Vec g = Vec::Zero(w.size());
  for (int r = 0; r < dataset.n(); ++r)
    g += dist.probs[r] * dataset.components[profile.permutation[r]].gradient(w);
  return g;
}

double surrogate_value(const Dataset& dataset, const Vec& w,
                       const SelectionScheme& scheme) {
  if (dataset.components.empty())
    throw InvalidInput("surrogate_value: empty dataset");
  const auto profile = ordering(dataset, w);
  const auto dist = rank_probabilities(dataset.n(), scheme);
  double v = 0.0;
  for (int r = 0; r < dataset.n(); ++r)
    v += dist.probs[r] * profile.sorted_losses[r];
  return v;
}

StationaryReport find_stationary_point(const Dataset& dataset, const Vec& w0,
                                       const SelectionScheme& scheme,
                                       double tol, int max_iters) {
  if (tol == 0.0) {
    bool logistic = false;
    for (const auto& c : dataset.components)
      logistic |= c.kind() == LossKind::kMulticlassLogistic;
    tol = logistic ? 1e-7 : 1e-10;
  }
  if (!(tol > 0.0)) throw InvalidInput("find_stationary_point: tol < 0");
  const double eta = default_step_size(dataset);
  Vec w = w0;
  Vec g = surrogate_gradient(dataset, w, scheme);
  int it = 0;
  while (g.norm() > tol && it < max_iters) {
    w -= eta * g;
    g = surrogate_gradient(dataset, w, scheme);
    ++it;
  }
  StationaryReport report;
  report.point = w;
  report.surrogate_gradient_norm = g.norm();
  report.converged = report.surrogate_gradient_norm <= tol;
  report.iterations = it;
  report.ordering_at_point = ordering(dataset, w);
  report.top_ranks_clean =
      top_ranks_clean(dataset, report.ordering_at_point);
  return report;
}

std::vector<ScanRow> scan_line(const Dataset& dataset, const Vec& a,
                               const Vec& b, int grid_points,
                               const SelectionScheme& scheme) {
  if (grid_points < 2) throw InvalidInput("scan_line: need at least 2 points");
  if (a.size() != b.size()) throw InvalidInput("scan_line: dimension mismatch");
  const Vec dir = b - a;
  const double len = dir.norm();
  if (len == 0.0) throw InvalidInput("scan_line: a and b coincide");
  const Vec unit = dir / len;

  std::vector<ScanRow> rows(grid_points);
  for (int i = 0; i < grid_points; ++i) {
    const double t = static_cast<double>(i) / (grid_points - 1);
    const Vec w = (1.0 - t) * a + t * b;
    ScanRow row;
    row.t = t;
    row.value = surrogate_value(dataset, w, scheme);
    row.directional_derivative =
        surrogate_gradient(dataset, w, scheme).dot(unit);
    row.signature = ordering_signature(dataset, ordering(dataset, w));
    rows[i] = std::move(row);
  }
  return rows;
}

}  // namespace minkloss
