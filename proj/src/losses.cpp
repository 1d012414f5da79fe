#include "minkloss/losses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "minkloss/errors.hpp"

namespace minkloss {

LossComponent LossComponent::scalar_quadratic(double curvature, double center,
                                              bool outlier) {
  if (!(curvature > 0.0))
    throw InvalidInput("scalar_quadratic: curvature must be positive");
  LossComponent c;
  c.kind_ = LossKind::kScalarQuadratic;
  c.curvature_ = curvature;
  c.vec_ = Vec::Constant(1, center);
  c.outlier_ = outlier;
  return c;
}

LossComponent LossComponent::vector_quadratic(double curvature, Vec center,
                                              bool outlier) {
  if (!(curvature > 0.0))
    throw InvalidInput("vector_quadratic: curvature must be positive");
  if (center.size() == 0)
    throw InvalidInput("vector_quadratic: empty center");
  LossComponent c;
  c.kind_ = LossKind::kVectorQuadratic;
  c.curvature_ = curvature;
  c.vec_ = std::move(center);
  c.outlier_ = outlier;
  return c;
}

LossComponent LossComponent::linear_regression(Vec features, double response,
                                               bool outlier) {
  if (features.size() == 0)
    throw InvalidInput("linear_regression: empty features");
  if (!features.allFinite())
    throw InvalidInput("linear_regression: non-finite features");
  LossComponent c;
  c.kind_ = LossKind::kLinearRegression;
  c.vec_ = std::move(features);
  c.response_ = response;
  c.outlier_ = outlier;
  return c;
}

LossComponent LossComponent::multiclass_logistic(Vec features, int label,
                                                 int num_classes,
                                                 bool outlier) {
  if (features.size() == 0)
    throw InvalidInput("multiclass_logistic: empty features");
  if (num_classes < 2)
    throw InvalidInput("multiclass_logistic: need at least two classes");
  if (label < 0 || label >= num_classes)
    throw InvalidInput("multiclass_logistic: label out of range");
  LossComponent c;
  c.kind_ = LossKind::kMulticlassLogistic;
  c.vec_ = std::move(features);
  c.label_ = label;
  c.num_classes_ = num_classes;
  c.outlier_ = outlier;
  return c;
}

void LossComponent::set_label(int label) {
  if (kind_ != LossKind::kMulticlassLogistic)
    throw InvalidInput("set_label: not a logistic component");
  if (label < 0 || label >= num_classes_)
    throw InvalidInput("set_label: label out of range");
  label_ = label;
}

int LossComponent::dimension() const {
  if (kind_ == LossKind::kMulticlassLogistic)
    return num_classes_ * static_cast<int>(vec_.size());
  return static_cast<int>(vec_.size());
}

void LossComponent::check_dimension(const Vec& w) const {
  if (w.size() != dimension())
    throw InvalidInput("loss component: parameter dimension mismatch");
}

namespace {

// Class scores s = W x with W read row-wise from the flattened w.
Vec logistic_scores(const Vec& w, const Vec& x, int num_classes) {
  const int d = static_cast<int>(x.size());
  Vec s(num_classes);
  for (int c = 0; c < num_classes; ++c) s[c] = w.segment(c * d, d).dot(x);
  return s;
}

}  // namespace

double LossComponent::value(const Vec& w) const {
  check_dimension(w);
  switch (kind_) {
    case LossKind::kScalarQuadratic:
    case LossKind::kVectorQuadratic:
      return curvature_ * (w - vec_).squaredNorm();
    case LossKind::kLinearRegression: {
      const double r = vec_.dot(w) - response_;
      return r * r;
    }
    case LossKind::kMulticlassLogistic: {
      const Vec s = logistic_scores(w, vec_, num_classes_);
      const double m = s.maxCoeff();
      double sum = 0.0;
      for (int c = 0; c < num_classes_; ++c) sum += std::exp(s[c] - m);
      return m + std::log(sum) - s[label_];
    }
  }
  throw InvalidInput("loss component: unknown kind");
}

Vec LossComponent::gradient(const Vec& w) const {
  check_dimension(w);
  switch (kind_) {
    case LossKind::kScalarQuadratic:
    case LossKind::kVectorQuadratic:
      return 2.0 * curvature_ * (w - vec_);
    case LossKind::kLinearRegression:
      return 2.0 * (vec_.dot(w) - response_) * vec_;
    case LossKind::kMulticlassLogistic: {
      const int d = static_cast<int>(vec_.size());
      const Vec s = logistic_scores(w, vec_, num_classes_);
      const double m = s.maxCoeff();
      Vec p(num_classes_);
      double sum = 0.0;
      for (int c = 0; c < num_classes_; ++c) {
        p[c] = std::exp(s[c] - m);
        sum += p[c];
      }
      p /= sum;
      Vec g(dimension());
      for (int c = 0; c < num_classes_; ++c) {
        const double coeff = p[c] - (c == label_ ? 1.0 : 0.0);
        g.segment(c * d, d) = coeff * vec_;
      }
      return g;
    }
  }
  throw InvalidInput("loss component: unknown kind");
}

double LossComponent::lipschitz() const {
  switch (kind_) {
    case LossKind::kScalarQuadratic:
    case LossKind::kVectorQuadratic:
      return 2.0 * curvature_;
    case LossKind::kLinearRegression:
      return 2.0 * vec_.squaredNorm();
    case LossKind::kMulticlassLogistic:
      return 0.5 * vec_.squaredNorm();
  }
  return 0.0;
}

int Dataset::dimension() const {
  if (components.empty()) return static_cast<int>(target.size());
  return components.front().dimension();
}

int Dataset::outlier_count() const {
  int m = 0;
  for (const auto& c : components) m += c.is_outlier() ? 1 : 0;
  return m;
}

double Dataset::epsilon() const {
  if (components.empty()) return 0.0;
  return static_cast<double>(outlier_count()) / static_cast<double>(n());
}

std::vector<int> Dataset::outlier_indices() const {
  std::vector<int> idx;
  for (int i = 0; i < n(); ++i)
    if (components[i].is_outlier()) idx.push_back(i);
  return idx;
}

std::vector<int> Dataset::clean_indices() const {
  std::vector<int> idx;
  for (int i = 0; i < n(); ++i)
    if (!components[i].is_outlier()) idx.push_back(i);
  return idx;
}

std::vector<double> Dataset::losses_at(const Vec& w) const {
  std::vector<double> out(components.size());
  for (size_t i = 0; i < components.size(); ++i)
    out[i] = components[i].value(w);
  return out;
}

Dataset Dataset::clean_subset() const {
  Dataset out;
  out.target = target;
  out.target_is_numeric = target_is_numeric;
  for (const auto& c : components)
    if (!c.is_outlier()) out.components.push_back(c);
  return out;
}

double loss_value(const LossComponent& component, const Vec& w) {
  return component.value(w);
}

Vec loss_gradient(const LossComponent& component, const Vec& w) {
  return component.gradient(w);
}

double sup_lipschitz(const Dataset& dataset) {
  if (dataset.components.empty())
    throw InvalidInput("sup_lipschitz: empty dataset");
  double L = 0.0;
  for (const auto& c : dataset.components) L = std::max(L, c.lipschitz());
  return L;
}

double default_step_size(const Dataset& dataset) {
  const double L = sup_lipschitz(dataset);
  if (!(L > 0.0)) throw DegenerateProblem("default_step_size: sup L_i is zero");
  return 1.0 / (2.0 * L);
}

namespace {

// Hessian of the average loss over `idx`. Exact for quadratic/regression
// components; returns false if any component has no constant Hessian.
bool average_hessian(const Dataset& dataset, const std::vector<int>& idx,
                     Mat& h) {
  const int d = dataset.dimension();
  h = Mat::Zero(d, d);
  if (idx.empty()) return true;
  for (int i : idx) {
    const auto& c = dataset.components[i];
    switch (c.kind()) {
      case LossKind::kScalarQuadratic:
      case LossKind::kVectorQuadratic:
        h.diagonal().array() += 2.0 * c.curvature();
        break;
      case LossKind::kLinearRegression:
        h.noalias() += 2.0 * c.features() * c.features().transpose();
        break;
      default:
        return false;
    }
  }
  h /= static_cast<double>(idx.size());
  return true;
}

double smallest_eigenvalue(const Mat& h) {
  Eigen::SelfAdjointEigenSolver<Mat> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace

ProblemConstants dataset_constants(const Dataset& dataset) {
  if (dataset.components.empty())
    throw InvalidInput("dataset_constants: empty dataset");
  ProblemConstants pc;
  pc.epsilon = dataset.epsilon();

  double l_min = std::numeric_limits<double>::infinity();
  for (const auto& c : dataset.components) {
    pc.L = std::max(pc.L, c.lipschitz());
    l_min = std::min(l_min, c.lipschitz());
  }
  pc.kappa = l_min > 0.0 ? pc.L / l_min
                         : std::numeric_limits<double>::infinity();

  if (dataset.target.size() == dataset.dimension()) {
    for (int i : dataset.outlier_indices())
      pc.G = std::max(pc.G, dataset.components[i].gradient(dataset.target).norm());
  }

  Mat h_clean, h_full;
  const bool exact = average_hessian(dataset, dataset.clean_indices(), h_clean) &&
                     average_hessian(dataset, [&] {
                       std::vector<int> all(dataset.n());
                       for (int i = 0; i < dataset.n(); ++i) all[i] = i;
                       return all;
                     }(), h_full);
  if (!exact) {
    pc.degenerate = true;
    return pc;
  }

  const double eig_clean = smallest_eigenvalue(h_clean);
  const double eig_full = smallest_eigenvalue(h_full);
  const double scale = std::max(1.0, h_clean.diagonal().maxCoeff());
  if (eig_clean <= 1e-12 * scale) {
    pc.lambda_good = 0.0;
    pc.degenerate = true;
  } else {
    pc.lambda_good = eig_clean;
  }
  pc.lambda_F = std::max(eig_full, 0.0);
  return pc;
}

}  // namespace minkloss
