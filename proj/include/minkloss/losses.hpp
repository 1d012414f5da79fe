#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

namespace minkloss {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class LossKind {
  kScalarQuadratic,    // l (w - c)^2 with d = 1
  kVectorQuadratic,    // l ||w - c||^2
  kLinearRegression,   // (x.w - y)^2
  kMulticlassLogistic  // softmax cross-entropy; w is the flattened C x d matrix
};

// One sample's convex loss: analytic value and gradient. The outlier flag is
// evaluation-only metadata; optimizers never read it except through the
// sanctioned oracle baseline.
class LossComponent {
 public:
  static LossComponent scalar_quadratic(double curvature, double center,
                                        bool outlier = false);
  static LossComponent vector_quadratic(double curvature, Vec center,
                                        bool outlier = false);
  static LossComponent linear_regression(Vec features, double response,
                                         bool outlier = false);
  static LossComponent multiclass_logistic(Vec features, int label,
                                           int num_classes,
                                           bool outlier = false);

  LossKind kind() const { return kind_; }
  bool is_outlier() const { return outlier_; }
  void set_outlier(bool flag) { outlier_ = flag; }

  // Expected dimension of the parameter vector.
  int dimension() const;

  double value(const Vec& w) const;
  Vec gradient(const Vec& w) const;

  // Gradient-Lipschitz constant: exact for quadratics (2l) and regression
  // (2||x||^2), the softmax Hessian bound ||x||^2 / 2 for logistic.
  double lipschitz() const;

  bool is_quadratic() const {
    return kind_ == LossKind::kScalarQuadratic ||
           kind_ == LossKind::kVectorQuadratic;
  }

  double curvature() const { return curvature_; }   // quadratics
  const Vec& center() const { return vec_; }        // quadratics
  const Vec& features() const { return vec_; }      // regression / logistic
  double response() const { return response_; }     // regression
  int label() const { return label_; }              // logistic
  int num_classes() const { return num_classes_; }  // logistic
  void set_label(int label);                        // logistic corruption

 private:
  LossComponent() = default;
  void check_dimension(const Vec& w) const;

  LossKind kind_ = LossKind::kScalarQuadratic;
  double curvature_ = 0.0;
  Vec vec_;  // center for quadratics, features otherwise
  double response_ = 0.0;
  int label_ = -1;
  int num_classes_ = 0;
  bool outlier_ = false;
};

// A problem instance: components, the clean optimum w*, and outlier metadata.
struct Dataset {
  std::vector<LossComponent> components;
  Vec target;                      // w*, optimum of the clean samples
  bool target_is_numeric = false;  // target came from a numerical solve
  std::optional<double> gamma;     // nearest/farthest outlier distance ratio

  int n() const { return static_cast<int>(components.size()); }
  int dimension() const;
  int outlier_count() const;
  double epsilon() const;  // outlier fraction
  std::vector<int> outlier_indices() const;
  std::vector<int> clean_indices() const;
  std::vector<double> losses_at(const Vec& w) const;
  Dataset clean_subset() const;
};

// Aggregate constants consumed by every landscape/bound check.
struct ProblemConstants {
  double L = 0.0;            // sup_i gradient-Lipschitz constant
  double lambda_good = 0.0;  // strong convexity of the clean average
  double lambda_F = 0.0;     // strong convexity of the full average
  double G = 0.0;            // sup over outliers of ||grad f_i(w*)||
  double kappa = 1.0;        // max/min component Lipschitz ratio
  double epsilon = 0.0;
  bool degenerate = false;   // clean Hessian singular or not exactly known
};

double loss_value(const LossComponent& component, const Vec& w);
Vec loss_gradient(const LossComponent& component, const Vec& w);

// Exact Hessian-based constants for quadratic/regression datasets; datasets
// containing logistic components get L, G and kappa but carry the degenerate
// flag (their strong-convexity parameters are not exactly known).
ProblemConstants dataset_constants(const Dataset& dataset);

// Largest component Lipschitz constant, sup_i L_i.
double sup_lipschitz(const Dataset& dataset);

// Step size used throughout when none is configured: 1 / (2 sup_i L_i).
double default_step_size(const Dataset& dataset);

}  // namespace minkloss
