#pragma once

#include "minkloss/losses.hpp"
#include "minkloss/sampling.hpp"
#include "minkloss/surrogate.hpp"

namespace minkloss {

// Largest total selection probability the outlier set can attain over the
// landscape: the sum of the top n_outliers rank probabilities.
double max_outlier_mass(int n, int n_outliers, const SelectionScheme& scheme);

// Scalar landscape condition: the outlier mass must stay below
// 1 / (1 + kappa sqrt(kappa)) for every bad local minimum to be avoidable.
double scalar_condition_threshold(double kappa);
bool scalar_condition(double kappa, double p_hat);

// Closest point to w_b on the segment toward w* where a clean loss with
// curvature l_m crosses an outlier loss with curvature l_M:
// (sqrt(l_m) w* + sqrt(l_M) w_b) / (sqrt(l_m) + sqrt(l_M)).
Vec loss_crossing_point(double l_m, double l_M, const Vec& w_star,
                        const Vec& w_b);

// Vector-case capture condition with outlier spread gamma and worst outlier
// angle: q = cos(theta)/gamma - 1 + sqrt(kappa) cos(theta)/gamma must be
// positive and the outlier mass at most 1 / (1 + kappa q). With gamma = 1 and
// cos(theta) = 1 the bound reduces to the scalar condition's threshold.
struct BasinCondition {
  double kappa = 1.0;
  double gamma = 1.0;
  double cos_theta_max = 1.0;
  double p_hat_max = 0.0;
  double q = 0.0;
  double bound = 0.0;
  bool holds = false;
};

BasinCondition basin_condition(double kappa, double gamma,
                               double cos_theta_max, double p_hat);

// Contraction factor comparing the min-k and SGD stationary-point distances:
// (1 - eps) L eps^(k-1) / lambda.
double contraction_alpha(double epsilon, double L, int k, double lambda);

// Naive global lower bound for the restricted-secant constant:
// (smallest rank probability) * lambda_F * n.
double naive_lambda(int n, const SelectionScheme& scheme, double lambda_F);

struct InequalityCheck {
  bool applicable = false;
  bool holds = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
};

// Stationary-point distance inequalities, each asserted at 1e-9 absolute.
//   sgd_lower_bound:  eps G(w_sgd) <= (1 - eps) L ||w_sgd - w*||
//   mkl_upper_bound:  ||w_mkl - w*|| <= eps^k G(w*) / lambda_est
//   clean_gradient_bound (stationary surrogate-gradient split):
//       ||sum_clean p_i grad f_i(w_mkl)||
//         <= min{(1 - eps^k) L ||w_mkl - w*||, eps^k G(w_mkl)}
//   relative_bound:   ||w_mkl - w*|| < alpha ||w_sgd - w*||, needs alpha < 1
// Bounds whose hypotheses fail are reported as not applicable, never failed.
struct BoundReport {
  double epsilon = 0.0;
  double L = 0.0;
  double lambda_est = 0.0;
  int k = 0;
  double alpha = 0.0;
  double sgd_distance = 0.0;
  double mkl_distance = 0.0;
  bool mkl_top_ranks_clean = false;
  InequalityCheck sgd_lower_bound;
  InequalityCheck mkl_upper_bound;
  InequalityCheck clean_gradient_bound;
  InequalityCheck relative_bound;
};

BoundReport check_bounds(const Vec& w_sgd, const Vec& w_mkl,
                         const Dataset& dataset, int k, double lambda_est);

// One-step distance recursion, checked against the exact enumerated
// expectation:
//   E ||w_{t+1} - w*||^2 <= (1 - psi) ||w_t - w*||^2 + eta r_t
// with psi = 2 eta lambda_good (1 - eta sup L_i) min_clean p_i(w_t) and the
// four-term residual
//   r_t = -2 sum_clean p_i <w_t - w*, grad f_i(w*)>
//       + sum_out p_i (2 eta ||grad f_i(w*)||^2 + eta ||grad f_i(w_t)||^2
//                      + 2 (f_i(w*) - f_i(w_t))).
// r_t_outlier_form drops the clean inner-product term (the specialization
// valid when every clean gradient vanishes at w*).
struct StepBoundReport {
  bool applicable = false;  // eta within the hypothesis eta <= 1 / sup L_i
  double eta = 0.0;
  double psi = 0.0;
  double r_t = 0.0;
  double r_t_outlier_form = 0.0;
  double delta_sq = 0.0;
  double exact_expected_next_sq = 0.0;
  double bound_value = 0.0;
  bool holds = false;
};

StepBoundReport exact_expected_step(const Dataset& dataset, const Vec& w,
                                    double eta, const SelectionScheme& scheme);

// Noise-level thresholds under which the selective step is never worse than
// uniform sampling: a per-sample gradient bound (scales with ||w_t - w*||)
// and a summed-squares bound (scales with ||w_t - w*||^2).
struct NoiseThresholds {
  double per_sample = 0.0;
  double aggregate_sq = 0.0;
};

NoiseThresholds noise_level_thresholds(const ProblemConstants& constants,
                                       double eta, int n, int n_good,
                                       double delta_norm);

}  // namespace minkloss
