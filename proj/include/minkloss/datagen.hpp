#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "minkloss/losses.hpp"
#include "minkloss/rng.hpp"

namespace minkloss {

enum class OutlierResponseRule {
  kShiftedModel,    // responses from a shifted parameter w_b = w* + shift u
  kStandardNormal,  // responses replaced by standard-normal draws
};

struct RegressionSpec {
  int d = 10;
  int n = 100;
  double kappa = 1.0;  // variance of the first feature coordinate
  double epsilon = 0.0;
  double noise_sigma = 0.0;
  double outlier_shift = 5.0;
  OutlierResponseRule outlier_rule = OutlierResponseRule::kShiftedModel;
  std::uint64_t seed = 0;
};

struct QuadraticEnsembleSpec {
  int d = 1;
  int n = 10;
  double epsilon = 0.0;
  double l_min = 1.0;  // per-component curvatures drawn uniformly
  double l_max = 1.0;
  // Explicit centers win (one shared center or one per outlier); otherwise
  // centers sit at w* + r u with r in [radius_min, radius_max].
  std::vector<Vec> outlier_centers;
  double radius_min = 4.0;
  double radius_max = 6.0;
  // Noisy setting: clean centers drawn uniformly in a ball of this radius
  // around w* (0 keeps them exactly at w*). Outliers must stay beyond twice
  // this distance.
  double clean_spread = 0.0;
  std::vector<double> target;  // empty: standard-normal draw
  std::uint64_t seed = 0;
};

enum class LabelNoiseModel {
  kDirected,  // class a -> a+1 (mod C) on the corrupted fraction
  kRandom,    // uniform wrong label
};

struct ClassificationSpec {
  int d = 20;
  int n = 4000;
  int class_count = 4;
  double blob_separation = 3.0;
  double epsilon = 0.0;
  LabelNoiseModel noise_model = LabelNoiseModel::kDirected;
  std::uint64_t seed = 0;
};

// Gaussian-feature regression: x ~ N(0, D) with D_11 = kappa and 1 elsewhere,
// clean responses x.w* (plus noise when noise_sigma > 0), floor(eps n)
// outliers corrupted by outlier_rule. The dataset carries w* and flags.
Dataset gen_regression(const RegressionSpec& spec);

// Quadratic components: clean ones centered exactly at w*, outliers at the
// given or drawn centers, curvatures uniform in [l_min, l_max]. gamma
// (nearest / farthest outlier distance) is attached when outliers exist.
Dataset gen_quadratic_ensemble(const QuadraticEnsembleSpec& spec);

// Gaussian class blobs with softmax components and corrupted labels. The
// target is the clean-subset minimizer found numerically (gradient norm
// <= 1e-7) and is flagged as such.
Dataset gen_classification(const ClassificationSpec& spec);

// Class means used by gen_classification, exposed so benchmarks can draw
// matching held-out test data.
std::vector<Vec> classification_means(const ClassificationSpec& spec);

// Fresh labeled points from the same blobs (balanced labels, never
// corrupted).
struct LabeledPoint {
  Vec x;
  int label;
};
std::vector<LabeledPoint> classification_sample(const ClassificationSpec& spec,
                                                int count, Rng& rng);

// Flat CSV serialization: header (kind, n, d, ...), one row per component
// ending in the outlier flag. Round-trips bit-exactly.
void save_dataset(const Dataset& dataset, const std::string& path);
Dataset load_dataset(const std::string& path);

}  // namespace minkloss
