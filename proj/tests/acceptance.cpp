// Acceptance suite: one test case per criterion, one [PASS]/[FAIL] line each.
#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "minkloss/datagen.hpp"
#include "minkloss/errors.hpp"
#include "minkloss/experiments.hpp"
#include "minkloss/optimizer.hpp"
#include "minkloss/surrogate.hpp"
#include "minkloss/theory.hpp"

namespace fs = std::filesystem;
using namespace minkloss;

namespace {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

void report(int number, const std::string& name, bool ok, double seconds) {
  std::printf("[%s] criterion %d: %s (%.1f s)\n", ok ? "PASS" : "FAIL", number,
              name.c_str(), seconds);
  std::fflush(stdout);
}

Vec gaussian_vec(int d, Rng& rng) {
  Vec v(d);
  for (int i = 0; i < d; ++i) v[i] = rng.normal();
  return v;
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

TEST_CASE("criterion 1: selection-probability exactness") {
  Stopwatch timer;
  bool ok = true;
  const int draws = 200000;
  Rng master(20260801);
  for (int n = 2; n <= 8; ++n) {
    std::vector<double> losses(n);
    for (int i = 0; i < n; ++i) losses[i] = static_cast<double>(i);
    for (int k = 1; k <= 4; ++k) {
      for (bool with : {true, false}) {
        const auto scheme = min_k_scheme(k, with);
        if (!with && k > n) {
          CHECK_THROWS_AS(rank_probabilities(n, scheme), InvalidInput);
          continue;
        }
        const auto dist = rank_probabilities(n, scheme);
        long double sum = 0.0L;
        for (double p : dist.probs) sum += p;
        ok &= std::abs(static_cast<double>(sum - 1.0L)) <= 1e-12;

        Rng rng = master.split(splitmix64(n * 100 + k * 10 + (with ? 1 : 0)));
        std::vector<int> counts(n, 0);
        for (int i = 0; i < draws; ++i)
          ++counts[select_index(losses, scheme, rng)];
        for (int r = 0; r < n; ++r) {
          const double p = dist.probs[r];
          const double freq = static_cast<double>(counts[r]) / draws;
          const double band = 4.0 * std::sqrt(p * (1.0 - p) / draws);
          if (std::abs(freq - p) > band) ok = false;
        }
      }
    }
  }
  const double elapsed = timer.seconds();
  ok &= elapsed < 5.0;
  report(1, "selection-probability exactness", ok, elapsed);
  CHECK(ok);
}

TEST_CASE("criterion 2: unique stationary point without outliers") {
  Stopwatch timer;
  bool ok = true;
  Rng rng(20260802);
  const int ks[] = {2, 3, 5};
  for (int instance = 0; instance < 50; ++instance) {
    QuadraticEnsembleSpec spec;
    spec.d = 1 + rng.index(10);
    spec.n = 5 + rng.index(46);
    spec.l_min = 0.5;
    spec.l_max = 5.0;
    spec.seed = rng.next_u64();
    const auto ds = gen_quadratic_ensemble(spec);
    const auto scheme = min_k_scheme(ks[instance % 3]);
    for (int init = 0; init < 10; ++init) {
      const Vec w0 = ds.target + 5.0 * gaussian_vec(spec.d, rng);
      const auto found = find_stationary_point(ds, w0, scheme, 1e-10, 200000);
      if (!found.converged ||
          (found.point - ds.target).norm() > 1e-6) {
        ok = false;
      }
    }
  }
  const double elapsed = timer.seconds();
  ok &= elapsed < 30.0;
  report(2, "unique stationary point on clean ensembles", ok, elapsed);
  CHECK(ok);
}

TEST_CASE("criterion 3: exact one-step distance recursion") {
  Stopwatch timer;
  bool ok = true;
  Rng rng(20260803);
  for (int instance = 0; instance < 6; ++instance) {
    const bool with_outliers = instance % 2 == 1;
    QuadraticEnsembleSpec spec;
    spec.d = 1 + rng.index(4);
    spec.n = 6 + rng.index(15);
    spec.epsilon = with_outliers ? 0.2 : 0.0;
    spec.l_min = 0.5;
    spec.l_max = 3.0;
    spec.radius_min = 3.0;
    spec.radius_max = 6.0;
    spec.seed = rng.next_u64();
    const auto ds = gen_quadratic_ensemble(spec);
    const double eta = default_step_size(ds);
    const int k = 1 + instance % 3;

    OptimizerConfig oc;
    oc.scheme = min_k_scheme(k);
    oc.step.initial = eta;
    oc.max_steps = 100;
    oc.record_every = 1;
    oc.seed = rng.next_u64();
    const auto traj =
        run(ds, oc, ds.target + 3.0 * gaussian_vec(spec.d, rng));
    for (const auto& point : traj.points) {
      const auto step = exact_expected_step(ds, point.w, eta, oc.scheme);
      if (!step.applicable || !step.holds) ok = false;
      if (step.exact_expected_next_sq > step.bound_value + 1e-9) ok = false;
      if (!with_outliers && step.r_t != 0.0) ok = false;
    }
  }
  const double elapsed = timer.seconds();
  report(3, "exact expected-step inequality along trajectories", ok, elapsed);
  CHECK(ok);
}

TEST_CASE("criterion 4: scalar closed-form fixed point") {
  Stopwatch timer;
  bool ok = true;
  Rng rng(20260804);
  for (int instance = 0; instance < 50; ++instance) {
    QuadraticEnsembleSpec spec;
    spec.d = 1;
    spec.n = 4 + rng.index(17);
    spec.epsilon = 0.15 + 0.15 * rng.uniform01();
    spec.l_min = 0.5;
    spec.l_max = 3.0;
    const double shift = 3.0 + 5.0 * rng.uniform01();
    spec.outlier_centers = {Vec::Constant(1, shift)};
    spec.target = {0.0};
    spec.seed = rng.next_u64();
    const auto ds = gen_quadratic_ensemble(spec);
    if (ds.outlier_count() == 0) continue;
    const auto scheme = min_k_scheme(2);

    // Both the adversarial outlier-center start and the clean start.
    for (const Vec& w0 : {Vec(Vec::Constant(1, shift)), Vec(Vec::Zero(1))}) {
      const auto found =
          find_stationary_point(ds, w0, scheme, 1e-12, 2000000);
      if (!found.converged) {
        ok = false;
        continue;
      }
      const auto probs = component_probabilities(ds, found.point, scheme);
      double num = 0.0, den = 0.0;
      for (int i = 0; i < ds.n(); ++i) {
        num += probs[i] * ds.components[i].curvature() *
               ds.components[i].center()[0];
        den += probs[i] * ds.components[i].curvature();
      }
      if (std::abs(found.point[0] - num / den) > 1e-8) ok = false;
    }
  }
  const double elapsed = timer.seconds();
  report(4, "scalar stationary points match the closed form", ok, elapsed);
  CHECK(ok);
}

TEST_CASE("criterion 5: relative stationary-distance bound") {
  Stopwatch timer;
  bool ok = true;
  Rng rng(20260805);
  int applicable = 0;
  int attempts = 0;
  while (applicable < 200 && attempts < 4000) {
    ++attempts;
    QuadraticEnsembleSpec spec;
    spec.n = 5 + rng.index(26);
    spec.d = 1 + rng.index(5);
    spec.epsilon = 1.0 / spec.n;
    spec.l_min = 1.0;
    spec.l_max = 1.0 + 0.3 / spec.n;
    spec.radius_min = 2.0;
    spec.radius_max = 8.0;
    spec.seed = rng.next_u64();
    const auto ds = gen_quadratic_ensemble(spec);
    const int k = 2 + rng.index(2);
    const auto pc = dataset_constants(ds);
    const double lambda_est =
        naive_lambda(ds.n(), min_k_scheme(k), pc.lambda_F);

    const auto sgd =
        find_stationary_point(ds, ds.target, min_k_scheme(1), 1e-11, 500000);
    const Vec w0 = ds.target + 2.0 * gaussian_vec(spec.d, rng);
    const auto mkl =
        find_stationary_point(ds, w0, min_k_scheme(k), 1e-11, 500000);
    if (!sgd.converged || !mkl.converged) continue;

    const auto bounds = check_bounds(sgd.point, mkl.point, ds, k, lambda_est);
    if (!bounds.relative_bound.applicable) continue;
    ++applicable;
    if (!bounds.relative_bound.holds) ok = false;
    if (bounds.sgd_lower_bound.applicable && !bounds.sgd_lower_bound.holds)
      ok = false;
    if (bounds.mkl_upper_bound.applicable && !bounds.mkl_upper_bound.holds)
      ok = false;
    if (bounds.clean_gradient_bound.applicable &&
        !bounds.clean_gradient_bound.holds)
      ok = false;
  }
  ok &= applicable == 200;
  const double elapsed = timer.seconds();
  report(5, "relative bound holds on 200/200 applicable instances", ok,
         elapsed);
  CHECK(ok);
}

namespace {

SweepConfig fig2_sweep_config() {
  SweepConfig config;
  config.family = "regression";
  config.regression.n = 200;
  config.regression.outlier_shift = 5.0;
  config.regression.seed = 606;
  config.epsilons = {0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40};
  config.kappas = {1.0, 10.0};
  config.ds = {10, 50};
  config.noise_sigmas = {0.0, 1.0};
  config.ks = {2};
  config.variants = {Variant::kSgd, Variant::kMkl};
  config.seeds.clear();
  for (std::uint64_t s = 0; s <= 20; ++s) config.seeds.push_back(s);
  config.optimizer.max_steps = 40000;
  config.optimizer.record_every = 10;
  config.optimizer.ema_decay = 0.99;
  return config;
}

}  // namespace

TEST_CASE("criterion 6: regression sweep, selection beats uniform sampling") {
  Stopwatch timer;
  bool ok = true;
  const auto records = run_sweep(fig2_sweep_config());
  const auto summaries = summarize(records);

  std::map<std::string, double> medians;
  for (const auto& s : summaries) {
    if (s.stats.count != 21) ok = false;
    medians[cell_key(s.cell)] = s.stats.median;
  }
  for (double kappa : {1.0, 10.0})
    for (int d : {10, 50})
      for (double sigma : {0.0, 1.0})
        for (double eps : {0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40}) {
          SweepCell cell;
          cell.family = "regression";
          cell.d = d;
          cell.n = 200;
          cell.kappa = kappa;
          cell.epsilon = eps;
          cell.noise_sigma = sigma;
          cell.k = 2;
          cell.variant = Variant::kMkl;
          const double mkl = medians.at(cell_key(cell));
          cell.variant = Variant::kSgd;
          const double sgd = medians.at(cell_key(cell));
          if (!(mkl < sgd)) ok = false;
        }
  const double elapsed = timer.seconds();
  ok &= elapsed < 300.0;
  report(6, "per-cell median selective error beats SGD for eps >= 0.1", ok,
         elapsed);
  CHECK(ok);
}

TEST_CASE("criterion 7: k-sweep trades robustness against speed") {
  Stopwatch timer;
  bool ok = true;
  SweepConfig config;
  config.family = "regression";
  config.regression.n = 100;
  config.regression.seed = 707;
  config.epsilons = {0.2};
  config.kappas = {1.0};
  config.ds = {50};
  config.noise_sigmas = {0.0};
  config.ks = {2, 3, 5};
  config.variants = {Variant::kMkl, Variant::kMedianLoss};
  config.seeds.clear();
  for (std::uint64_t s = 0; s <= 20; ++s) config.seeds.push_back(s);
  config.optimizer.max_steps = 1600000;
  config.optimizer.record_every = 10;
  const auto records = run_sweep(config);

  std::map<int, std::vector<double>> mkl_dist, med_dist;
  std::map<int, std::vector<double>> mkl_plateau;
  for (const auto& r : records) {
    if (r.cell.variant == Variant::kMkl) {
      mkl_dist[r.cell.k].push_back(r.distance_ema);
      mkl_plateau[r.cell.k].push_back(static_cast<double>(r.plateau_step));
    } else {
      med_dist[r.cell.k].push_back(r.distance_ema);
    }
  }
  const double d2 = median_of(mkl_dist[2]);
  const double d3 = median_of(mkl_dist[3]);
  const double d5 = median_of(mkl_dist[5]);
  if (!(d2 >= d3 && d3 >= d5)) ok = false;
  const double p2 = median_of(mkl_plateau[2]);
  const double p3 = median_of(mkl_plateau[3]);
  const double p5 = median_of(mkl_plateau[5]);
  if (!(p2 <= p3 && p3 <= p5)) ok = false;
  for (int k : {2, 3, 5})
    if (median_of(med_dist[k]) < median_of(mkl_dist[k])) ok = false;
  const double elapsed = timer.seconds();
  report(7, "larger k is more robust but slower; median-loss never wins", ok,
         elapsed);
  CHECK(ok);
}

TEST_CASE("criterion 8: classification analog under directed label noise") {
  Stopwatch timer;
  bool ok = true;
  ClassificationBenchmarkConfig config;
  config.spec.d = 20;
  config.spec.n = 4000;
  config.spec.class_count = 4;
  config.spec.blob_separation = 2.5;
  config.spec.noise_model = LabelNoiseModel::kDirected;
  config.spec.seed = 808;
  config.epsilons = {0.1, 0.2, 0.3, 0.4};
  config.variants = {Variant::kSgd, Variant::kMkl, Variant::kOracle};
  config.mkl_k = 10;
  config.mkl_alpha = 0.5;
  config.seeds = {0, 1, 2, 3, 4};
  config.optimizer.max_steps = 100000;
  config.optimizer.record_every = 20;
  config.n_test = 100000;
  const auto results = classification_benchmark(config);

  std::map<std::pair<double, Variant>, const ClassificationCellResult*> cells;
  for (const auto& r : results) cells[{r.epsilon, r.variant}] = &r;
  const auto acc = [&](double eps, Variant v) {
    return cells.at({eps, v})->accuracy_mean;
  };

  // Headline gap at eps = 0.3 and the oracle >= mkl >= sgd ordering.
  if (!(acc(0.3, Variant::kMkl) >= acc(0.3, Variant::kSgd) + 5.0)) ok = false;
  for (double eps : {0.1, 0.2, 0.3, 0.4}) {
    if (!(acc(eps, Variant::kOracle) >= acc(eps, Variant::kMkl))) ok = false;
    if (!(acc(eps, Variant::kMkl) >= acc(eps, Variant::kSgd))) ok = false;
  }
  // Overfit signature at eps = 0.2: selection keeps the corrupted-train loss
  // higher while generalizing better.
  const auto* mkl02 = cells.at({0.2, Variant::kMkl});
  const auto* sgd02 = cells.at({0.2, Variant::kSgd});
  if (!(mkl02->train_loss_final >= sgd02->train_loss_final)) ok = false;
  if (!(mkl02->test_loss_final <= sgd02->test_loss_final)) ok = false;

  const double elapsed = timer.seconds();
  report(8, "directed-noise benchmark: gap, ordering and overfit signature",
         ok, elapsed);
  CHECK(ok);
}

TEST_CASE("criterion 9: surrogate gradient soundness") {
  Stopwatch timer;
  bool ok = true;
  Rng rng(20260809);

  // Monte-Carlo agreement on 20 small instances.
  for (int instance = 0; instance < 20; ++instance) {
    QuadraticEnsembleSpec spec;
    spec.d = 1 + rng.index(3);
    spec.n = 3 + rng.index(6);
    spec.epsilon = rng.uniform01() < 0.5 ? 0.0 : 1.0 / spec.n;
    spec.l_min = 0.5;
    spec.l_max = 2.5;
    spec.radius_min = 2.0;
    spec.radius_max = 4.0;
    spec.seed = rng.next_u64();
    const auto ds = gen_quadratic_ensemble(spec);
    const auto scheme = min_k_scheme(1 + rng.index(4));
    const Vec w = ds.target + 2.0 * gaussian_vec(spec.d, rng);

    const auto losses = ds.losses_at(w);
    std::vector<Vec> grads;
    grads.reserve(ds.n());
    for (const auto& c : ds.components) grads.push_back(c.gradient(w));

    const int draws = 1000000;
    std::vector<std::int64_t> counts(ds.n(), 0);
    Rng draw_rng = rng.split(instance + 1);
    for (int i = 0; i < draws; ++i)
      ++counts[select_index(losses, scheme, draw_rng)];

    Vec mc_mean = Vec::Zero(spec.d);
    for (int i = 0; i < ds.n(); ++i)
      mc_mean += (static_cast<double>(counts[i]) / draws) * grads[i];
    const Vec exact = surrogate_gradient(ds, w, scheme);
    for (int coord = 0; coord < spec.d; ++coord) {
      double var = 0.0;
      for (int i = 0; i < ds.n(); ++i)
        var += (static_cast<double>(counts[i]) / draws) *
               (grads[i][coord] - mc_mean[coord]) *
               (grads[i][coord] - mc_mean[coord]);
      const double se = std::sqrt(var / draws);
      if (std::abs(mc_mean[coord] - exact[coord]) > 4.0 * se + 1e-12)
        ok = false;
    }
  }

  // Restricted secant with the naive lambda on noiseless ensembles.
  {
    QuadraticEnsembleSpec spec;
    spec.d = 5;
    spec.n = 20;
    spec.l_min = 0.5;
    spec.l_max = 3.0;
    spec.seed = 909;
    const auto quad = gen_quadratic_ensemble(spec);

    RegressionSpec reg;
    reg.d = 5;
    reg.n = 40;
    reg.seed = 910;
    const auto lin = gen_regression(reg);

    for (const Dataset* ds : {&quad, &lin}) {
      const auto scheme = min_k_scheme(3);
      const auto pc = dataset_constants(*ds);
      const double lambda_w = naive_lambda(ds->n(), scheme, pc.lambda_F);
      for (int trial = 0; trial < 1000; ++trial) {
        const Vec w = ds->target + 3.0 * gaussian_vec(5, rng);
        const Vec delta = w - ds->target;
        const double lhs = surrogate_gradient(*ds, w, scheme).dot(delta);
        if (lhs < lambda_w * delta.squaredNorm() - 1e-9) ok = false;
      }
    }
  }

  const double elapsed = timer.seconds();
  report(9, "monte-carlo agreement and restricted secant", ok, elapsed);
  CHECK(ok);
}

namespace {

int run_cli(const std::string& args) {
  const std::string cmd =
      std::string(MINKLOSS_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  return WEXITSTATUS(std::system(cmd.c_str()));
}

std::string slurp(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void put(const fs::path& path, const std::string& text) {
  std::ofstream f(path);
  f << text;
}

}  // namespace

TEST_CASE("criterion 10: CLI replay determinism") {
  Stopwatch timer;
  bool ok = true;
  const fs::path dir = fs::temp_directory_path() / "minkloss_acceptance_cli";
  fs::remove_all(dir);
  fs::create_directories(dir);

  put(dir / "sweep.ini", R"([problem]
family = regression
d = 6
n = 60
epsilon = 0.2
seed = 5

[grid]
epsilon = 0.1, 0.3
variant = sgd, mkl, oracle

[optimizer]
max_steps = 1500

[sweep]
seeds = 0..4
threads = 2
)");
  const std::string fixture_problem = R"([problem]
family = quadratic
d = 1
n = 2
epsilon = 0.5
l_min = 1
l_max = 1
outlier_center = 2
target = 0
seed = 0
)";
  put(dir / "fixture_theory.ini",
      fixture_problem + "\n[theory]\nk = 2\nsteps = 50\ninit = 0.5\n");
  put(dir / "fixture_land.ini",
      fixture_problem +
          "\n[landscape]\nk = 2\ngrid_points = 101\na = -0.5\nb = 2.5\n"
          "stationary_init = 0.4\n");
  put(dir / "classify.ini", R"([problem]
family = classification
d = 6
n = 300
classes = 3
blob_separation = 3
seed = 2

[classify]
epsilon = 0.2
variant = sgd, mkl
mkl_k = 6
mkl_alpha = 0.5
seeds = 0, 1
n_test = 2000
series_points = 10
threads = 2

[optimizer]
max_steps = 3000
)");

  const auto replay_equal = [&](const std::string& args,
                                const std::vector<fs::path>& payloads,
                                const std::string& tag) {
    std::vector<std::string> first;
    for (int round = 0; round < 2; ++round) {
      for (const auto& p : payloads) fs::remove_all(p);
      if (run_cli(args) != 0) return false;
      for (size_t i = 0; i < payloads.size(); ++i) {
        const std::string content = slurp(payloads[i]);
        if (content.empty()) return false;
        if (round == 0)
          first.push_back(content);
        else if (first[i] != content)
          return false;
      }
    }
    (void)tag;
    return true;
  };

  ok &= replay_equal(
      "probabilities --n 7 --k 3 --out " + (dir / "probs.csv").string(),
      {dir / "probs.csv"}, "probabilities");
  ok &= replay_equal("sweep --config " + (dir / "sweep.ini").string() +
                         " --out " + (dir / "sweep_out").string(),
                     {dir / "sweep_out" / "records.csv",
                      dir / "sweep_out" / "summary.csv"},
                     "sweep");
  ok &= replay_equal("landscape --config " + (dir / "fixture_land.ini").string() +
                         " --out " + (dir / "scan.csv").string() +
                         " --stationary-json " + (dir / "stationary.json").string(),
                     {dir / "scan.csv", dir / "stationary.json"}, "landscape");
  ok &= replay_equal("theory-check --config " +
                         (dir / "fixture_theory.ini").string() + " --out " +
                         (dir / "report.json").string(),
                     {dir / "report.json"}, "theory-check");
  ok &= replay_equal("classify --config " + (dir / "classify.ini").string() +
                         " --out " + (dir / "classify_out").string(),
                     {dir / "classify_out" / "accuracy.csv",
                      dir / "classify_out" / "series.csv"},
                     "classify");

  const double elapsed = timer.seconds();
  report(10, "CLI reruns replay byte-identically", ok, elapsed);
  CHECK(ok);
}
