#include <doctest.h>

#include <cmath>
#include <vector>

#include "minkloss/datagen.hpp"
#include "minkloss/errors.hpp"
#include "minkloss/experiments.hpp"
#include "minkloss/optimizer.hpp"
#include "test_util.hpp"

using namespace minkloss;
using testutil::fit_line;
using testutil::gaussian_vec;

namespace {

Dataset shared_center_ensemble(int n, int d, std::uint64_t seed) {
  QuadraticEnsembleSpec spec;
  spec.d = d;
  spec.n = n;
  spec.l_min = 0.5;
  spec.l_max = 5.0;
  spec.seed = seed;
  return gen_quadratic_ensemble(spec);
}

Trajectory run_variant(const Dataset& ds, int k, std::uint64_t seed,
                       int max_steps, int record_every = 10) {
  OptimizerConfig oc;
  oc.scheme = min_k_scheme(k);
  oc.step.initial = default_step_size(ds);
  oc.max_steps = max_steps;
  oc.record_every = record_every;
  oc.seed = seed;
  return run(ds, oc, Vec::Zero(ds.dimension()));
}

}  // namespace

TEST_CASE("one explicit update step") {
  Dataset ds;
  ds.components.push_back(LossComponent::scalar_quadratic(1.0, 1.0));
  ds.target = Vec::Constant(1, 1.0);
  OptimizerConfig oc;
  oc.scheme = min_k_scheme(1);
  oc.step.initial = 0.25;
  oc.max_steps = 1;
  oc.seed = 0;
  const auto traj = run(ds, oc, Vec::Constant(1, 2.0));
  CHECK(traj.final_w[0] == doctest::Approx(1.5));  // w - 0.25 * 2 (w - 1)
  CHECK(traj.loss_evaluations == 1);
}

TEST_CASE("noiseless ensemble converges to the shared center") {
  const auto ds = shared_center_ensemble(20, 5, 17);
  const auto traj = run_variant(ds, 2, 5, 10000);
  CHECK(!traj.diverged);
  CHECK(error_to_target(traj.final_w, ds.target) <= 1e-6);
}

TEST_CASE("oracle run equals plain SGD on the clean sub-dataset") {
  QuadraticEnsembleSpec spec;
  spec.d = 3;
  spec.n = 10;
  spec.epsilon = 0.3;
  spec.l_min = 0.5;
  spec.l_max = 2.0;
  spec.seed = 4;
  const auto ds = gen_quadratic_ensemble(spec);
  const auto clean = ds.clean_subset();

  OptimizerConfig oc;
  oc.scheme = min_k_scheme(1);
  oc.step.initial = 0.01;
  oc.max_steps = 500;
  oc.record_every = 1;
  oc.seed = 99;
  oc.oracle_mode = true;
  const auto oracle_traj = run(ds, oc, Vec::Zero(3));

  oc.oracle_mode = false;
  const auto clean_traj = run(clean, oc, Vec::Zero(3));

  REQUIRE(oracle_traj.points.size() == clean_traj.points.size());
  for (size_t i = 0; i < oracle_traj.points.size(); ++i)
    CHECK(oracle_traj.points[i].w == clean_traj.points[i].w);
}

TEST_CASE("k = 1 reproduces a hand-rolled SGD loop draw for draw") {
  const auto ds = shared_center_ensemble(12, 4, 23);
  OptimizerConfig oc;
  oc.scheme = min_k_scheme(1);
  oc.step.initial = default_step_size(ds);
  oc.max_steps = 200;
  oc.record_every = 1;
  oc.seed = 7;
  const auto traj = run(ds, oc, Vec::Zero(4));

  Rng rng(7);
  Vec w = Vec::Zero(4);
  for (int t = 1; t <= oc.max_steps; ++t) {
    const int i = rng.index(ds.n());
    w -= oc.step.initial * ds.components[i].gradient(w);
    CHECK(traj.points[t].w == w);
  }
}

TEST_CASE("identical configuration gives bit-identical trajectories") {
  const auto ds = shared_center_ensemble(15, 3, 2);
  const auto a = run_variant(ds, 3, 11, 300, 1);
  const auto b = run_variant(ds, 3, 11, 300, 1);
  REQUIRE(a.points.size() == b.points.size());
  for (size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.points[i].w == b.points[i].w);
    CHECK(a.points[i].chosen == b.points[i].chosen);
  }
  CHECK(a.ema_w == b.ema_w);
}

TEST_CASE("noiseless runs contract linearly, selection slows the rate") {
  const auto ds = shared_center_ensemble(20, 5, 31);
  const auto fit_log_distance = [&](const Trajectory& traj) {
    std::vector<double> steps, logs;
    for (const auto& p : traj.points) {
      if (p.dist > 1e-12) {
        steps.push_back(static_cast<double>(p.step));
        logs.push_back(std::log(p.dist * p.dist));
      }
    }
    REQUIRE(steps.size() >= 10);
    return fit_line(steps, logs);
  };
  const auto sgd = fit_log_distance(run_variant(ds, 1, 3, 4000, 2));
  const auto mkl = fit_log_distance(run_variant(ds, 3, 3, 4000, 2));
  CHECK(sgd.slope < 0.0);
  CHECK(mkl.slope < 0.0);
  CHECK(sgd.r2 >= 0.95);
  CHECK(mkl.r2 >= 0.95);
  CHECK(std::abs(sgd.slope) >= std::abs(mkl.slope));
}

TEST_CASE("selection beats uniform sampling on corrupted regression") {
  // 21-seed median comparison on one representative cell.
  std::vector<double> sgd_err, mkl_err;
  for (std::uint64_t seed = 0; seed < 21; ++seed) {
    RegressionSpec spec;
    spec.d = 10;
    spec.n = 100;
    spec.epsilon = 0.3;
    spec.seed = 1000 + seed;
    const auto ds = gen_regression(spec);
    sgd_err.push_back(
        error_to_target(run_variant(ds, 1, seed, 6000).ema_w, ds.target));
    mkl_err.push_back(
        error_to_target(run_variant(ds, 2, seed, 6000).ema_w, ds.target));
  }
  std::sort(sgd_err.begin(), sgd_err.end());
  std::sort(mkl_err.begin(), mkl_err.end());
  CHECK(mkl_err[10] < sgd_err[10]);
}

TEST_CASE("divergence guard reports the step") {
  Dataset ds;
  ds.components.push_back(LossComponent::scalar_quadratic(1.0, 0.0));
  ds.target = Vec::Zero(1);
  OptimizerConfig oc;
  oc.scheme = min_k_scheme(1);
  oc.step.initial = 5.0;  // far beyond the stable range
  oc.max_steps = 1000;
  oc.seed = 0;
  const auto traj = run(ds, oc, Vec::Constant(1, 10.0));
  CHECK(traj.diverged);
  CHECK(traj.diverged_step > 0);
  CHECK(traj.diverged_step <= 1000);
}

TEST_CASE("ema readout") {
  Trajectory traj;
  const auto push = [&](double v) {
    TrajectoryPoint p;
    p.w = Vec::Constant(1, v);
    traj.points.push_back(p);
  };
  SUBCASE("constant trajectory returns the constant") {
    for (int i = 0; i < 5; ++i) push(3.25);
    CHECK(ema_readout(traj, 0.9)[0] == doctest::Approx(3.25));
  }
  SUBCASE("two iterates weight the recent one more") {
    push(0.0);
    push(1.0);
    CHECK(ema_readout(traj, 0.5)[0] == doctest::Approx(2.0 / 3.0));
  }
  SUBCASE("zero decay returns the last iterate") {
    push(4.0);
    push(9.0);
    CHECK(ema_readout(traj, 0.0)[0] == doctest::Approx(9.0));
  }
  SUBCASE("empty trajectory is rejected") {
    CHECK_THROWS_AS(ema_readout(traj, 0.5), InvalidInput);
  }
}

TEST_CASE("error_to_target") {
  CHECK(error_to_target(Vec::Constant(3, 1.0), Vec::Constant(3, 1.0)) == 0.0);
  Vec w(2), t(2);
  w << 3.0, 4.0;
  t << 0.0, 0.0;
  CHECK(error_to_target(w, t) == doctest::Approx(5.0));
  CHECK_THROWS_AS(error_to_target(w, Vec::Zero(3)), InvalidInput);

  Rng rng(5);
  const Vec a = gaussian_vec(6, rng), b = gaussian_vec(6, rng);
  double ss = 0.0;
  for (int i = 0; i < 6; ++i) ss += (a[i] - b[i]) * (a[i] - b[i]);
  CHECK(std::abs(error_to_target(a, b) - std::sqrt(ss)) <= 1e-12);
}

TEST_CASE("step schedule decays by the factor each period") {
  StepSchedule s;
  s.initial = 1.0;
  s.decay_factor = 5.0;
  s.decay_period = 30;
  CHECK(s.at(0) == doctest::Approx(1.0));
  CHECK(s.at(29) == doctest::Approx(1.0));
  CHECK(s.at(30) == doctest::Approx(0.2));
  CHECK(s.at(60) == doctest::Approx(0.04));
}

TEST_CASE("plateau stopping ends the run early") {
  const auto ds = shared_center_ensemble(10, 2, 8);
  OptimizerConfig oc;
  oc.scheme = min_k_scheme(2);
  oc.step.initial = default_step_size(ds);
  oc.max_steps = 200000;
  oc.record_every = 10;
  oc.seed = 1;
  oc.stop_on_plateau = true;
  const auto traj = run(ds, oc, Vec::Zero(2));
  CHECK(traj.stopped_on_plateau);
  CHECK(traj.steps_taken < oc.max_steps);
  CHECK(traj.plateau_step() <= traj.steps_taken);
}
