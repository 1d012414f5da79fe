#include "minkloss/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "minkloss/errors.hpp"

namespace minkloss {

namespace {
constexpr double kBoundTol = 1e-9;
}

double max_outlier_mass(int n, int n_outliers, const SelectionScheme& scheme) {
  if (n_outliers < 0 || n_outliers > n)
    throw InvalidInput("max_outlier_mass: outlier count out of range");
  if (n_outliers == 0) return 0.0;
  const auto dist = rank_probabilities(n, scheme);
  double sum = 0.0;
  for (int r = 0; r < n_outliers; ++r) sum += dist.probs[r];
  return std::min(sum, 1.0);
}

double scalar_condition_threshold(double kappa) {
  if (kappa < 1.0) throw InvalidInput("scalar_condition: kappa must be >= 1");
  return 1.0 / (1.0 + kappa * std::sqrt(kappa));
}

bool scalar_condition(double kappa, double p_hat) {
  if (p_hat < 0.0 || p_hat > 1.0)
    throw InvalidInput("scalar_condition: p_hat must lie in [0, 1]");
  return p_hat < scalar_condition_threshold(kappa);
}

Vec loss_crossing_point(double l_m, double l_M, const Vec& w_star,
                        const Vec& w_b) {
  if (!(l_m > 0.0) || !(l_M > 0.0))
    throw InvalidInput("loss_crossing_point: curvatures must be positive");
  if (w_star.size() != w_b.size())
    throw InvalidInput("loss_crossing_point: dimension mismatch");
  const double sm = std::sqrt(l_m);
  const double sM = std::sqrt(l_M);
  return (sm * w_star + sM * w_b) / (sm + sM);
}

BasinCondition basin_condition(double kappa, double gamma,
                               double cos_theta_max, double p_hat) {
  if (kappa < 1.0) throw InvalidInput("basin_condition: kappa must be >= 1");
  if (!(gamma > 0.0) || gamma > 1.0)
    throw InvalidInput("basin_condition: gamma must lie in (0, 1]");
  if (cos_theta_max < -1.0 || cos_theta_max > 1.0)
    throw InvalidInput("basin_condition: cos_theta out of range");
  BasinCondition c;
  c.kappa = kappa;
  c.gamma = gamma;
  c.cos_theta_max = cos_theta_max;
  c.p_hat_max = p_hat;
  c.q = cos_theta_max / gamma - 1.0 + std::sqrt(kappa) * cos_theta_max / gamma;
  c.bound = c.q > 0.0 ? 1.0 / (1.0 + kappa * c.q)
                      : std::numeric_limits<double>::quiet_NaN();
  c.holds = c.q > 0.0 && p_hat <= c.bound;
  return c;
}

double contraction_alpha(double epsilon, double L, int k, double lambda) {
  if (epsilon < 0.0 || epsilon >= 1.0)
    throw InvalidInput("contraction_alpha: epsilon must lie in [0, 1)");
  if (k < 1) throw InvalidInput("contraction_alpha: k must be >= 1");
  if (!(lambda > 0.0))
    throw DegenerateProblem("contraction_alpha: lambda must be positive");
  return (1.0 - epsilon) * L * std::pow(epsilon, k - 1) / lambda;
}

double naive_lambda(int n, const SelectionScheme& scheme, double lambda_F) {
  const auto dist = rank_probabilities(n, scheme);
  const double p_min = *std::min_element(dist.probs.begin(), dist.probs.end());
  return p_min * lambda_F * n;
}

namespace {

double max_outlier_gradient_norm(const Dataset& dataset, const Vec& at) {
  double g = 0.0;
  for (int i : dataset.outlier_indices())
    g = std::max(g, dataset.components[i].gradient(at).norm());
  return g;
}

InequalityCheck make_check(bool applicable, double lhs, double rhs) {
  InequalityCheck c;
  c.applicable = applicable;
  c.lhs = lhs;
  c.rhs = rhs;
  c.slack = rhs - lhs;
  c.holds = applicable && lhs <= rhs + kBoundTol;
  return c;
}

}  // namespace

BoundReport check_bounds(const Vec& w_sgd, const Vec& w_mkl,
                         const Dataset& dataset, int k, double lambda_est) {
  if (w_sgd.size() != dataset.dimension() ||
      w_mkl.size() != dataset.dimension() ||
      dataset.target.size() != dataset.dimension())
    throw InvalidInput("check_bounds: dimension mismatch");
  if (!(lambda_est > 0.0))
    throw DegenerateProblem("check_bounds: lambda_est must be positive");

  const ProblemConstants pc = dataset_constants(dataset);
  const SelectionScheme scheme = min_k_scheme(k);

  BoundReport report;
  report.epsilon = pc.epsilon;
  report.L = pc.L;
  report.lambda_est = lambda_est;
  report.k = k;
  report.sgd_distance = (w_sgd - dataset.target).norm();
  report.mkl_distance = (w_mkl - dataset.target).norm();
  report.alpha = contraction_alpha(pc.epsilon, pc.L, k, lambda_est);

  const auto mkl_profile = ordering(dataset, w_mkl);
  report.mkl_top_ranks_clean = top_ranks_clean(dataset, mkl_profile);

  const double eps_k = std::pow(pc.epsilon, k);
  const double g_sgd = max_outlier_gradient_norm(dataset, w_sgd);
  const double g_mkl = max_outlier_gradient_norm(dataset, w_mkl);

  // The outlier pull at the SGD fixed point cannot exceed what the clean
  // mass can balance, which bounds the SGD distance from below.
  report.sgd_lower_bound =
      make_check(pc.epsilon > 0.0, pc.epsilon * g_sgd,
                 (1.0 - pc.epsilon) * pc.L * report.sgd_distance);

  // Upper bound on the min-k stationary distance; needs the point inside the
  // basin where clean losses rank first.
  report.mkl_upper_bound = make_check(
      report.mkl_top_ranks_clean, report.mkl_distance,
      lambda_est > 0.0 ? eps_k * pc.G / lambda_est
                       : std::numeric_limits<double>::infinity());

  // At a stationary point the clean part of the expected gradient equals the
  // outlier part, so both caps apply to it.
  {
    const auto probs = component_probabilities(dataset, w_mkl, scheme);
    Vec clean_part = Vec::Zero(dataset.dimension());
    for (int i : dataset.clean_indices())
      clean_part += probs[i] * dataset.components[i].gradient(w_mkl);
    const double rhs = std::min((1.0 - eps_k) * pc.L * report.mkl_distance,
                                eps_k * g_mkl);
    report.clean_gradient_bound =
        make_check(report.mkl_top_ranks_clean, clean_part.norm(), rhs);
  }

  // Relative bound: strict comparison, applicable once alpha < 1 and the
  // min-k point sits in the clean basin.
  {
    const bool applicable = pc.epsilon > 0.0 && report.alpha < 1.0 &&
                            report.mkl_top_ranks_clean;
    InequalityCheck c;
    c.applicable = applicable;
    c.lhs = report.mkl_distance;
    c.rhs = report.alpha * report.sgd_distance;
    c.slack = c.rhs - c.lhs;
    c.holds = applicable && c.lhs < c.rhs + kBoundTol;
    report.relative_bound = c;
  }
  return report;
}

StepBoundReport exact_expected_step(const Dataset& dataset, const Vec& w,
                                    double eta, const SelectionScheme& scheme) {
  if (w.size() != dataset.dimension())
    throw InvalidInput("exact_expected_step: dimension mismatch");
  if (!(eta > 0.0)) throw InvalidInput("exact_expected_step: eta <= 0");
  if (dataset.target.size() != dataset.dimension())
    throw InvalidInput("exact_expected_step: dataset has no target");

  const ProblemConstants pc = dataset_constants(dataset);
  if (pc.degenerate)
    throw DegenerateProblem(
        "exact_expected_step: strong-convexity constants unavailable");
  const double sup_l = sup_lipschitz(dataset);

  StepBoundReport report;
  report.eta = eta;
  report.applicable = eta <= 1.0 / sup_l + 1e-15;

  const auto probs = component_probabilities(dataset, w, scheme);
  const Vec delta = w - dataset.target;
  report.delta_sq = delta.squaredNorm();

  double exact = 0.0;
  double min_clean_p = std::numeric_limits<double>::infinity();
  double clean_term = 0.0;
  double outlier_terms = 0.0;
  for (int i = 0; i < dataset.n(); ++i) {
    const auto& c = dataset.components[i];
    const Vec grad_w = c.gradient(w);
    exact += probs[i] * (w - eta * grad_w - dataset.target).squaredNorm();
    if (c.is_outlier()) {
      const Vec grad_star = c.gradient(dataset.target);
      outlier_terms +=
          probs[i] * (2.0 * eta * grad_star.squaredNorm() +
                      eta * grad_w.squaredNorm() +
                      2.0 * (c.value(dataset.target) - c.value(w)));
    } else {
      min_clean_p = std::min(min_clean_p, probs[i]);
      clean_term += probs[i] * delta.dot(c.gradient(dataset.target));
    }
  }
  if (!std::isfinite(min_clean_p)) min_clean_p = 0.0;

  report.exact_expected_next_sq = exact;
  report.psi = 2.0 * eta * pc.lambda_good * (1.0 - eta * sup_l) * min_clean_p;
  report.r_t_outlier_form = outlier_terms;
  report.r_t = -2.0 * clean_term + outlier_terms;
  report.bound_value = (1.0 - report.psi) * report.delta_sq + eta * report.r_t;
  report.holds =
      report.applicable && exact <= report.bound_value + kBoundTol;
  return report;
}

NoiseThresholds noise_level_thresholds(const ProblemConstants& constants,
                                       double eta, int n, int n_good,
                                       double delta_norm) {
  if (n < 1 || n_good < 0 || n_good > n)
    throw InvalidInput("noise_level_thresholds: bad counts");
  if (!(eta > 0.0) || eta > 1.0 / constants.L + 1e-15)
    throw InvalidInput("noise_level_thresholds: eta must lie in (0, 1/sup L]");
  const double a = 1.0 - eta * constants.L;
  const double lg = constants.lambda_good;
  NoiseThresholds t;
  t.per_sample = (lg * a / n) /
                 (1.0 + std::sqrt(1.0 + eta * a * lg / n)) * delta_norm;
  const double g = static_cast<double>(n_good);
  const double num = lg * a * g / n;
  const double den =
      std::sqrt(static_cast<double>(n)) +
      std::sqrt(std::sqrt(static_cast<double>(n)) + eta * a * lg * g / n);
  const double ratio = num / den;
  t.aggregate_sq = ratio * ratio * delta_norm * delta_norm;
  return t;
}

}  // namespace minkloss
