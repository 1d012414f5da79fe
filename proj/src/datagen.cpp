#include "minkloss/datagen.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "minkloss/errors.hpp"

namespace minkloss {

namespace {

// Substream ids keep generated fields independent of one another.
enum Stream : std::uint64_t {
  kTargetStream = 0,
  kFeatureStream = 1,
  kNoiseStream = 2,
  kOutlierPickStream = 3,
  kOutlierValueStream = 4,
  kCurvatureStream = 5,
  kCleanSpreadStream = 6,
};

int outlier_count_for(double epsilon, int n) {
  if (epsilon < 0.0 || epsilon >= 1.0)
    throw InvalidInput("generator: epsilon must lie in [0, 1)");
  return static_cast<int>(std::floor(epsilon * n + 1e-9));
}

std::vector<bool> pick_outlier_flags(int n, int m, Rng& rng) {
  std::vector<bool> flags(n, false);
  // Floyd's subset draw.
  for (int j = n - m; j < n; ++j) {
    const int t = rng.index(j + 1);
    if (flags[t])
      flags[j] = true;
    else
      flags[t] = true;
  }
  return flags;
}

Vec gaussian_vector(int d, Rng& rng) {
  Vec v(d);
  for (int i = 0; i < d; ++i) v[i] = rng.normal();
  return v;
}

Vec random_unit(int d, Rng& rng) {
  Vec v = gaussian_vector(d, rng);
  double norm = v.norm();
  while (norm == 0.0) {
    v = gaussian_vector(d, rng);
    norm = v.norm();
  }
  return v / norm;
}

}  // namespace

Dataset gen_regression(const RegressionSpec& spec) {
  if (spec.d < 1 || spec.n < 1) throw InvalidInput("gen_regression: bad size");
  if (spec.kappa < 1.0)
    throw InvalidInput("gen_regression: kappa must be >= 1");
  const Rng base(spec.seed);

  Dataset ds;
  {
    Rng r = base.split(kTargetStream);
    ds.target = gaussian_vector(spec.d, r);
  }

  const int m = outlier_count_for(spec.epsilon, spec.n);
  std::vector<bool> flags;
  {
    Rng r = base.split(kOutlierPickStream);
    flags = pick_outlier_flags(spec.n, m, r);
  }

  Vec w_b = ds.target;
  Rng value_rng = base.split(kOutlierValueStream);
  if (spec.outlier_rule == OutlierResponseRule::kShiftedModel && m > 0) {
    if (!(spec.outlier_shift > 0.0))
      throw InvalidInput("gen_regression: outlier_shift must be positive");
    w_b = ds.target + spec.outlier_shift * random_unit(spec.d, value_rng);
  }

  Rng feature_rng = base.split(kFeatureStream);
  Rng noise_rng = base.split(kNoiseStream);
  const double scale0 = std::sqrt(spec.kappa);
  ds.components.reserve(spec.n);
  for (int i = 0; i < spec.n; ++i) {
    Vec x = gaussian_vector(spec.d, feature_rng);
    x[0] *= scale0;
    double y;
    if (flags[i]) {
      y = spec.outlier_rule == OutlierResponseRule::kShiftedModel
              ? x.dot(w_b)
              : value_rng.normal();
    } else {
      y = x.dot(ds.target);
    }
    if (spec.noise_sigma > 0.0) y += spec.noise_sigma * noise_rng.normal();
    ds.components.push_back(LossComponent::linear_regression(
        std::move(x), y, flags[i]));
  }
  return ds;
}

Dataset gen_quadratic_ensemble(const QuadraticEnsembleSpec& spec) {
  if (spec.d < 1 || spec.n < 1)
    throw InvalidInput("gen_quadratic_ensemble: bad size");
  if (!(spec.l_min > 0.0) || spec.l_max < spec.l_min)
    throw InvalidInput("gen_quadratic_ensemble: bad curvature range");
  const Rng base(spec.seed);

  Dataset ds;
  if (!spec.target.empty()) {
    if (static_cast<int>(spec.target.size()) != spec.d)
      throw InvalidInput("gen_quadratic_ensemble: target dimension mismatch");
    ds.target = Eigen::Map<const Vec>(spec.target.data(), spec.d);
  } else {
    Rng r = base.split(kTargetStream);
    ds.target = gaussian_vector(spec.d, r);
  }

  const int m = outlier_count_for(spec.epsilon, spec.n);
  std::vector<bool> flags;
  {
    Rng r = base.split(kOutlierPickStream);
    flags = pick_outlier_flags(spec.n, m, r);
  }

  std::vector<Vec> centers;
  if (m > 0) {
    if (!spec.outlier_centers.empty()) {
      if (spec.outlier_centers.size() != 1 &&
          static_cast<int>(spec.outlier_centers.size()) != m)
        throw InvalidInput(
            "gen_quadratic_ensemble: give one shared center or one per outlier");
      for (int j = 0; j < m; ++j) {
        const Vec& c = spec.outlier_centers.size() == 1
                           ? spec.outlier_centers.front()
                           : spec.outlier_centers[j];
        if (c.size() != spec.d)
          throw InvalidInput("gen_quadratic_ensemble: center dimension mismatch");
        if ((c - ds.target).norm() == 0.0)
          throw InvalidInput(
              "gen_quadratic_ensemble: outlier center coincides with target");
        centers.push_back(c);
      }
    } else {
      if (!(spec.radius_min > 0.0) || spec.radius_max < spec.radius_min)
        throw InvalidInput("gen_quadratic_ensemble: bad radius range");
      Rng r = base.split(kOutlierValueStream);
      for (int j = 0; j < m; ++j) {
        const double radius = r.uniform(spec.radius_min, spec.radius_max);
        centers.push_back(ds.target + radius * random_unit(spec.d, r));
      }
    }
    double dist_min = std::numeric_limits<double>::infinity();
    double dist_max = 0.0;
    for (const auto& c : centers) {
      const double dist = (c - ds.target).norm();
      dist_min = std::min(dist_min, dist);
      dist_max = std::max(dist_max, dist);
    }
    ds.gamma = dist_min / dist_max;
  }

  if (spec.clean_spread < 0.0)
    throw InvalidInput("gen_quadratic_ensemble: negative clean_spread");
  if (spec.clean_spread > 0.0) {
    // Outlier optima must stay at least twice the clean spread away.
    for (const auto& c : centers)
      if ((c - ds.target).norm() <= 2.0 * spec.clean_spread)
        throw InvalidInput(
            "gen_quadratic_ensemble: outlier center within twice the clean "
            "spread");
  }

  Rng curvature_rng = base.split(kCurvatureStream);
  Rng spread_rng = base.split(kCleanSpreadStream);
  int next_center = 0;
  for (int i = 0; i < spec.n; ++i) {
    const double l = spec.l_min == spec.l_max
                         ? spec.l_min
                         : curvature_rng.uniform(spec.l_min, spec.l_max);
    if (flags[i]) {
      ds.components.push_back(
          LossComponent::vector_quadratic(l, centers[next_center++], true));
    } else if (spec.clean_spread > 0.0) {
      // Uniform in the ball: radius scales as u^(1/d).
      const double radius =
          spec.clean_spread *
          std::pow(spread_rng.uniform01(), 1.0 / spec.d);
      ds.components.push_back(LossComponent::vector_quadratic(
          l, ds.target + radius * random_unit(spec.d, spread_rng), false));
    } else {
      ds.components.push_back(
          LossComponent::vector_quadratic(l, ds.target, false));
    }
  }
  return ds;
}

std::vector<Vec> classification_means(const ClassificationSpec& spec) {
  if (spec.d < 1 || spec.class_count < 2)
    throw InvalidInput("classification: bad size");
  Rng r = Rng(spec.seed).split(kTargetStream);
  std::vector<Vec> means;
  means.reserve(spec.class_count);
  for (int c = 0; c < spec.class_count; ++c)
    means.push_back(spec.blob_separation * random_unit(spec.d, r));
  return means;
}

std::vector<LabeledPoint> classification_sample(const ClassificationSpec& spec,
                                                int count, Rng& rng) {
  const auto means = classification_means(spec);
  std::vector<LabeledPoint> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    const int label = i % spec.class_count;
    out.push_back({means[label] + gaussian_vector(spec.d, rng), label});
  }
  return out;
}

namespace {

// Clean-subset minimizer: accelerated full-batch descent with gradient-based
// momentum restarts, on a packed feature matrix.
Vec logistic_clean_optimum(const Dataset& ds, double grad_tol) {
  const auto clean = ds.clean_indices();
  if (clean.empty()) throw InvalidInput("classification: no clean samples");
  const auto& head = ds.components[clean.front()];
  const int num_classes = head.num_classes();
  const int d = static_cast<int>(head.features().size());
  const int m = static_cast<int>(clean.size());

  Mat features(m, d);
  std::vector<int> labels(m);
  double mean_lip = 0.0;
  for (int r = 0; r < m; ++r) {
    const auto& c = ds.components[clean[r]];
    features.row(r) = c.features().transpose();
    labels[r] = c.label();
    mean_lip += c.lipschitz();
  }
  mean_lip /= m;
  const double eta = 1.0 / mean_lip;

  using RowMat =
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  RowMat weights = RowMat::Zero(num_classes, d);
  RowMat prev = weights;
  RowMat y(num_classes, d), grad(num_classes, d);
  Mat probs(m, num_classes);

  const auto mean_gradient = [&](const RowMat& at, RowMat& out) {
    probs.noalias() = features * at.transpose();
    for (int r = 0; r < m; ++r) {
      const double mx = probs.row(r).maxCoeff();
      double sum = 0.0;
      for (int c = 0; c < num_classes; ++c) {
        probs(r, c) = std::exp(probs(r, c) - mx);
        sum += probs(r, c);
      }
      probs.row(r) /= sum;
      probs(r, labels[r]) -= 1.0;
    }
    out.noalias() = probs.transpose() * features;
    out /= static_cast<double>(m);
  };

  int since_restart = 0;
  for (int it = 1; it <= 200000; ++it) {
    const double momentum = since_restart / (since_restart + 3.0);
    y = weights + momentum * (weights - prev);
    mean_gradient(y, grad);
    prev = weights;
    weights = y - eta * grad;
    ++since_restart;
    if ((grad.array() * (weights - prev).array()).sum() > 0.0)
      since_restart = 0;
    if (it % 10 == 0) {
      mean_gradient(weights, grad);
      if (grad.norm() <= grad_tol) break;
    }
  }

  Vec flat(num_classes * d);
  Eigen::Map<RowMat>(flat.data(), num_classes, d) = weights;
  return flat;
}

}  // namespace

Dataset gen_classification(const ClassificationSpec& spec) {
  if (spec.n < spec.class_count)
    throw InvalidInput("gen_classification: need at least one sample per class");
  const Rng base(spec.seed);
  const auto means = classification_means(spec);

  Dataset ds;
  {
    Rng r = base.split(kFeatureStream);
    for (int i = 0; i < spec.n; ++i) {
      const int label = i % spec.class_count;
      Vec x = means[label] + gaussian_vector(spec.d, r);
      ds.components.push_back(LossComponent::multiclass_logistic(
          std::move(x), label, spec.class_count, false));
    }
  }

  const int m = outlier_count_for(spec.epsilon, spec.n);
  {
    Rng pick = base.split(kOutlierPickStream);
    Rng relabel = base.split(kOutlierValueStream);
    const auto flags = pick_outlier_flags(spec.n, m, pick);
    for (int i = 0; i < spec.n; ++i) {
      if (!flags[i]) continue;
      auto& comp = ds.components[i];
      int wrong;
      if (spec.noise_model == LabelNoiseModel::kDirected) {
        wrong = (comp.label() + 1) % spec.class_count;
      } else {
        wrong = relabel.index(spec.class_count - 1);
        if (wrong >= comp.label()) ++wrong;
      }
      comp.set_label(wrong);
      comp.set_outlier(true);
    }
  }

  ds.target = logistic_clean_optimum(ds, 1e-7);
  ds.target_is_numeric = true;
  return ds;
}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

void save_dataset(const Dataset& dataset, const std::string& path) {
  if (dataset.components.empty())
    throw InvalidInput("save_dataset: empty dataset");
  std::string kind;
  switch (dataset.components.front().kind()) {
    case LossKind::kScalarQuadratic:
    case LossKind::kVectorQuadratic:
      kind = "quadratic";
      break;
    case LossKind::kLinearRegression:
      kind = "regression";
      break;
    case LossKind::kMulticlassLogistic:
      kind = "logistic";
      break;
  }
  auto kind_class = [](const LossComponent& c) -> std::string {
    if (c.is_quadratic()) return "quadratic";
    return c.kind() == LossKind::kLinearRegression ? "regression" : "logistic";
  };
  for (const auto& c : dataset.components)
    if (kind_class(c) != kind)
      throw InvalidInput("save_dataset: mixed component kinds");

  std::ostringstream out;
  out << "minkloss-dataset,v1\n";
  out << "kind," << kind << "\n";
  out << "n," << dataset.n() << "\n";
  out << "d," << dataset.dimension() << "\n";
  if (kind == "logistic")
    out << "classes," << dataset.components.front().num_classes() << "\n";
  out << "target_is_numeric," << (dataset.target_is_numeric ? 1 : 0) << "\n";
  out << "gamma," << (dataset.gamma ? fmt_double(*dataset.gamma) : "none")
      << "\n";
  out << "target";
  for (int i = 0; i < dataset.target.size(); ++i)
    out << "," << fmt_double(dataset.target[i]);
  out << "\n";
  for (const auto& c : dataset.components) {
    if (c.is_quadratic()) {
      out << fmt_double(c.curvature());
      for (int i = 0; i < c.center().size(); ++i)
        out << "," << fmt_double(c.center()[i]);
    } else if (c.kind() == LossKind::kLinearRegression) {
      out << fmt_double(c.response());
      for (int i = 0; i < c.features().size(); ++i)
        out << "," << fmt_double(c.features()[i]);
    } else {
      out << c.label();
      for (int i = 0; i < c.features().size(); ++i)
        out << "," << fmt_double(c.features()[i]);
    }
    out << "," << (c.is_outlier() ? 1 : 0) << "\n";
  }

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw InvalidInput("save_dataset: cannot open " + path);
  file << out.str();
}

Dataset load_dataset(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw InvalidInput("load_dataset: cannot open " + path);
  std::string line;
  auto next_line = [&]() {
    if (!std::getline(file, line))
      throw InvalidInput("load_dataset: truncated file " + path);
    return split_csv(line);
  };

  auto header = next_line();
  if (header.size() != 2 || header[0] != "minkloss-dataset" ||
      header[1] != "v1")
    throw InvalidInput("load_dataset: bad header in " + path);
  const std::string kind = next_line().at(1);
  const int n = std::stoi(next_line().at(1));
  const int d = std::stoi(next_line().at(1));
  int classes = 0;
  if (kind == "logistic") classes = std::stoi(next_line().at(1));
  const bool target_is_numeric = next_line().at(1) == "1";
  const auto gamma_field = next_line().at(1);

  Dataset ds;
  ds.target_is_numeric = target_is_numeric;
  if (gamma_field != "none") ds.gamma = std::stod(gamma_field);
  auto target_row = next_line();
  if (target_row.empty() || target_row[0] != "target" ||
      static_cast<int>(target_row.size()) != d + 1)
    throw InvalidInput("load_dataset: bad target row in " + path);
  ds.target.resize(d);
  for (int i = 0; i < d; ++i) ds.target[i] = std::stod(target_row[i + 1]);

  const int feat_dim = kind == "logistic" ? d / classes : d;
  for (int row = 0; row < n; ++row) {
    auto fields = next_line();
    if (static_cast<int>(fields.size()) != feat_dim + 2)
      throw InvalidInput("load_dataset: bad component row in " + path);
    const bool outlier = fields.back() == "1";
    Vec v(feat_dim);
    for (int i = 0; i < feat_dim; ++i) v[i] = std::stod(fields[i + 1]);
    if (kind == "quadratic") {
      if (feat_dim == 1)
        ds.components.push_back(LossComponent::scalar_quadratic(
            std::stod(fields[0]), v[0], outlier));
      else
        ds.components.push_back(LossComponent::vector_quadratic(
            std::stod(fields[0]), std::move(v), outlier));
    } else if (kind == "regression") {
      ds.components.push_back(LossComponent::linear_regression(
          std::move(v), std::stod(fields[0]), outlier));
    } else {
      ds.components.push_back(LossComponent::multiclass_logistic(
          std::move(v), std::stoi(fields[0]), classes, outlier));
    }
  }
  return ds;
}

}  // namespace minkloss
