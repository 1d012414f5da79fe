#include "minkloss/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "minkloss/errors.hpp"

namespace minkloss {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Shorter, stable text for grid coordinates (they come from config axes, so
// equal cells produce identical strings).
std::string fmt_coord(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

void parallel_for(int num_tasks, int threads, const std::function<void(int)>& fn) {
  if (threads <= 0)
    threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, num_tasks));
  if (threads == 1) {
    for (int i = 0; i < num_tasks; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= num_tasks) break;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::kSgd:
      return "sgd";
    case Variant::kMkl:
      return "mkl";
    case Variant::kMedianLoss:
      return "median";
    case Variant::kOracle:
      return "oracle";
  }
  return "?";
}

Variant variant_from_name(const std::string& name) {
  if (name == "sgd") return Variant::kSgd;
  if (name == "mkl") return Variant::kMkl;
  if (name == "median") return Variant::kMedianLoss;
  if (name == "oracle") return Variant::kOracle;
  throw InvalidInput("unknown optimizer variant '" + name + "'");
}

std::string cell_key(const SweepCell& cell) {
  std::ostringstream out;
  out << cell.family << ',' << cell.d << ',' << cell.n << ','
      << fmt_coord(cell.kappa) << ',' << fmt_coord(cell.epsilon) << ','
      << fmt_coord(cell.noise_sigma) << ',' << cell.k << ','
      << variant_name(cell.variant);
  return out.str();
}

OptimizerConfig variant_optimizer_config(Variant variant, int k,
                                         const OptimizerDefaults& defaults,
                                         const Dataset& dataset,
                                         std::uint64_t run_seed) {
  OptimizerConfig oc;
  switch (variant) {
    case Variant::kSgd:
      oc.scheme = min_k_scheme(1);
      break;
    case Variant::kMkl:
      oc.scheme = min_k_scheme(k);
      break;
    case Variant::kMedianLoss:
      oc.scheme = median_loss_scheme(k);
      break;
    case Variant::kOracle:
      oc.scheme = min_k_scheme(1);
      oc.oracle_mode = true;
      break;
  }
  oc.step.initial =
      defaults.eta > 0.0 ? defaults.eta : default_step_size(dataset);
  oc.step.decay_factor = defaults.eta_decay_factor;
  oc.step.decay_period = defaults.eta_decay_period;
  oc.max_steps = defaults.max_steps;
  oc.ema_decay = defaults.ema_decay;
  oc.record_every = defaults.record_every;
  oc.stop_on_plateau = defaults.stop_on_plateau;
  oc.seed = run_seed;
  return oc;
}

namespace {

struct SweepTask {
  SweepCell cell;
  std::uint64_t seed = 0;
  std::uint64_t data_stream = 0;
  std::uint64_t run_stream = 0;
};

Dataset make_cell_dataset(const SweepConfig& config, const SweepCell& cell,
                          std::uint64_t data_stream) {
  if (cell.family == "regression") {
    RegressionSpec spec = config.regression;
    spec.d = cell.d;
    spec.n = cell.n;
    spec.kappa = cell.kappa;
    spec.epsilon = cell.epsilon;
    spec.noise_sigma = cell.noise_sigma;
    spec.seed = data_stream;
    return gen_regression(spec);
  }
  if (cell.family == "quadratic") {
    QuadraticEnsembleSpec spec = config.quadratic;
    spec.d = cell.d;
    spec.n = cell.n;
    spec.epsilon = cell.epsilon;
    spec.seed = data_stream;
    return gen_quadratic_ensemble(spec);
  }
  throw InvalidInput("run_sweep: unknown problem family '" + cell.family + "'");
}

}  // namespace

std::vector<RunRecord> run_sweep(const SweepConfig& config) {
  if (config.epsilons.empty() || config.kappas.empty() ||
      config.noise_sigmas.empty() || config.ks.empty() || config.ds.empty() ||
      config.variants.empty())
    throw InvalidInput("run_sweep: empty grid axis");
  std::vector<std::uint64_t> seeds = config.seeds;
  if (seeds.empty())
    for (std::uint64_t s = 0; s <= 20; ++s) seeds.push_back(s);
  {
    auto sorted = seeds;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw InvalidInput("run_sweep: seeds must be distinct");
  }

  const int base_n =
      config.family == "regression" ? config.regression.n : config.quadratic.n;
  const std::uint64_t base_seed = config.family == "regression"
                                      ? config.regression.seed
                                      : config.quadratic.seed;

  // Dataset and run streams depend on the grid coordinates and the seed but
  // never on the variant or k, so every optimizer faces identical data and
  // draw sequences where its parameters coincide.
  std::vector<SweepTask> tasks;
  for (size_t di = 0; di < config.ds.size(); ++di)
    for (size_t ki = 0; ki < config.kappas.size(); ++ki)
      for (size_t ei = 0; ei < config.epsilons.size(); ++ei)
        for (size_t si = 0; si < config.noise_sigmas.size(); ++si)
          for (size_t kk = 0; kk < config.ks.size(); ++kk)
            for (Variant variant : config.variants)
              for (std::uint64_t seed : seeds) {
                SweepTask task;
                task.cell.family = config.family;
                task.cell.d = config.ds[di];
                task.cell.n = base_n;
                task.cell.kappa = config.kappas[ki];
                task.cell.epsilon = config.epsilons[ei];
                task.cell.noise_sigma = config.noise_sigmas[si];
                task.cell.k = config.ks[kk];
                task.cell.variant = variant;
                task.seed = seed;
                std::uint64_t h = splitmix64(base_seed ^ splitmix64(seed));
                h = splitmix64(h ^ splitmix64(di));
                h = splitmix64(h ^ splitmix64(ki + 101));
                h = splitmix64(h ^ splitmix64(ei + 503));
                h = splitmix64(h ^ splitmix64(si + 907));
                task.data_stream = h;
                task.run_stream = splitmix64(h ^ 0x5bf03635ebb10a03ULL);
                tasks.push_back(std::move(task));
              }

  std::vector<RunRecord> records(tasks.size());
  parallel_for(static_cast<int>(tasks.size()), config.threads, [&](int i) {
    const SweepTask& task = tasks[i];
    const auto t0 = std::chrono::steady_clock::now();
    const Dataset dataset = make_cell_dataset(config, task.cell, task.data_stream);
    const OptimizerConfig oc = variant_optimizer_config(
        task.cell.variant, task.cell.k, config.optimizer, dataset,
        task.run_stream);
    const Vec w0 = Vec::Zero(dataset.dimension());
    const Trajectory traj = run(dataset, oc, w0);

    RunRecord rec;
    rec.cell = task.cell;
    rec.seed = task.seed;
    rec.converged = !traj.diverged;
    rec.distance_ema = error_to_target(traj.ema_w, dataset.target);
    rec.distance_final = error_to_target(traj.final_w, dataset.target);
    rec.steps = traj.steps_taken;
    rec.plateau_step = traj.plateau_step();
    rec.loss_evals = traj.loss_evaluations;
    rec.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    records[i] = std::move(rec);
  });
  return records;
}

std::vector<CellSummary> summarize(const std::vector<RunRecord>& records) {
  if (records.empty()) throw InvalidInput("summarize: no records");
  std::vector<CellSummary> out;
  std::map<std::string, size_t> index;
  std::vector<std::vector<double>> values;
  for (const auto& rec : records) {
    const std::string key = cell_key(rec.cell);
    auto [it, inserted] = index.try_emplace(key, out.size());
    if (inserted) {
      out.push_back(CellSummary{rec.cell, {}});
      values.emplace_back();
    }
    auto& summary = out[it->second];
    if (!rec.converged || !std::isfinite(rec.distance_ema)) {
      ++summary.stats.diverged;
      continue;
    }
    values[it->second].push_back(rec.distance_ema);
  }
  for (size_t i = 0; i < out.size(); ++i) {
    auto& stats = out[i].stats;
    auto& v = values[i];
    stats.count = static_cast<int>(v.size());
    if (v.empty()) continue;
    std::sort(v.begin(), v.end());
    auto quantile = [&](double q) {
      const double h = q * (v.size() - 1);
      const size_t lo = static_cast<size_t>(h);
      if (lo + 1 >= v.size()) return v.back();
      return v[lo] + (h - lo) * (v[lo + 1] - v[lo]);
    };
    stats.median = quantile(0.5);
    stats.q25 = quantile(0.25);
    stats.q75 = quantile(0.75);
    double sum = 0.0;
    for (double x : v) sum += x;
    stats.mean = sum / v.size();
    double ss = 0.0;
    for (double x : v) ss += (x - stats.mean) * (x - stats.mean);
    stats.stddev = v.size() > 1 ? std::sqrt(ss / (v.size() - 1)) : 0.0;
  }
  return out;
}

std::string records_to_csv(const std::vector<RunRecord>& records) {
  std::ostringstream out;
  out << "# " << kRunRecordSchema << "\n" << kRunRecordHeader << "\n";
  for (const auto& r : records) {
    out << cell_key(r.cell) << ',' << r.seed << ',' << fmt(r.distance_ema)
        << ',' << fmt(r.distance_final) << ',' << (r.converged ? 1 : 0) << ','
        << r.steps << ',' << r.plateau_step << ',' << r.loss_evals << "\n";
  }
  return out.str();
}

std::string summaries_to_csv(const std::vector<CellSummary>& summaries) {
  std::ostringstream out;
  out << "# " << kSummarySchema << "\n" << kSummaryHeader << "\n";
  for (const auto& s : summaries) {
    out << cell_key(s.cell) << ',' << s.stats.count << ',' << s.stats.diverged
        << ',' << fmt(s.stats.median) << ',' << fmt(s.stats.mean) << ','
        << fmt(s.stats.stddev) << ',' << fmt(s.stats.q25) << ','
        << fmt(s.stats.q75) << "\n";
  }
  return out.str();
}

std::string scan_to_csv(const std::vector<ScanRow>& rows) {
  std::ostringstream out;
  out << "# " << kScanSchema << "\n" << kScanHeader << "\n";
  for (const auto& r : rows) {
    out << fmt(r.t) << ',' << fmt(r.value) << ','
        << fmt(r.directional_derivative) << ',' << r.signature << "\n";
  }
  return out.str();
}

namespace {

double mean_loss(const std::vector<LossComponent>& components, const Vec& w) {
  double sum = 0.0;
  for (const auto& c : components) sum += c.value(w);
  return sum / static_cast<double>(components.size());
}

double mean_loss_points(const std::vector<LabeledPoint>& points,
                        int num_classes, const Vec& w) {
  double sum = 0.0;
  for (const auto& p : points)
    sum +=
        LossComponent::multiclass_logistic(p.x, p.label, num_classes).value(w);
  return sum / static_cast<double>(points.size());
}

int predict_class(const Vec& w, const Vec& x, int num_classes) {
  const int d = static_cast<int>(x.size());
  int best = 0;
  double best_score = w.segment(0, d).dot(x);
  for (int c = 1; c < num_classes; ++c) {
    const double score = w.segment(c * d, d).dot(x);
    if (score > best_score) {
      best_score = score;
      best = c;
    }
  }
  return best;
}

}  // namespace

std::vector<ClassificationCellResult> classification_benchmark(
    const ClassificationBenchmarkConfig& config) {
  if (config.epsilons.empty() || config.variants.empty() ||
      config.seeds.empty())
    throw InvalidInput("classification_benchmark: empty grid");

  struct Task {
    size_t cell_index;
    size_t data_index;
    double epsilon;
    Variant variant;
    std::uint64_t seed;
  };
  std::vector<ClassificationCellResult> cells;
  std::vector<Task> tasks;
  for (size_t ei = 0; ei < config.epsilons.size(); ++ei)
    for (Variant variant : config.variants) {
      ClassificationCellResult cell;
      cell.epsilon = config.epsilons[ei];
      cell.variant = variant;
      cell.accuracies.resize(config.seeds.size(), 0.0);
      cells.push_back(std::move(cell));
      for (size_t si = 0; si < config.seeds.size(); ++si)
        tasks.push_back(Task{cells.size() - 1,
                             ei * config.seeds.size() + si,
                             config.epsilons[ei], variant, config.seeds[si]});
    }

  // Datasets and test splits depend on (epsilon, seed) only; build each once.
  std::vector<Dataset> datasets(config.epsilons.size() * config.seeds.size());
  parallel_for(static_cast<int>(datasets.size()), config.threads, [&](int i) {
    const size_t ei = static_cast<size_t>(i) / config.seeds.size();
    const size_t si = static_cast<size_t>(i) % config.seeds.size();
    ClassificationSpec spec = config.spec;
    spec.epsilon = config.epsilons[ei];
    spec.seed = splitmix64(config.spec.seed ^ splitmix64(config.seeds[si]));
    datasets[i] = gen_classification(spec);
  });
  std::vector<std::vector<LabeledPoint>> test_sets(config.seeds.size());
  for (size_t si = 0; si < config.seeds.size(); ++si) {
    // Same blob means as the seed's training datasets (epsilon-independent).
    ClassificationSpec spec = config.spec;
    spec.seed = splitmix64(config.spec.seed ^ splitmix64(config.seeds[si]));
    Rng test_rng = Rng(config.spec.seed)
                       .split(0x7e57da7aULL ^ splitmix64(config.seeds[si]));
    test_sets[si] = classification_sample(spec, config.n_test, test_rng);
  }

  struct TaskResult {
    double accuracy = 0.0;
    double train_loss = 0.0;
    double test_loss = 0.0;
    std::vector<SeriesPoint> series;
  };
  std::vector<TaskResult> results(tasks.size());

  parallel_for(static_cast<int>(tasks.size()), config.threads, [&](int i) {
    const Task& task = tasks[i];
    const Dataset& dataset = datasets[task.data_index];
    const std::uint64_t data_seed =
        splitmix64(config.spec.seed ^ splitmix64(task.seed));

    OptimizerConfig oc = variant_optimizer_config(
        task.variant, config.mkl_k, config.optimizer, dataset,
        splitmix64(data_seed ^ 0x8f1bbcdcbfa53e0bULL));
    // Every variant evaluates k losses per step; SGD and the oracle keep the
    // whole batch, the selective variant keeps the lowest ceil(alpha k).
    switch (task.variant) {
      case Variant::kMkl:
        oc.scheme = batched_scheme(config.mkl_k, config.mkl_alpha);
        break;
      case Variant::kSgd:
      case Variant::kOracle:
        oc.scheme = batched_scheme(config.mkl_k, 1.0);
        oc.batch_keep_all = true;
        break;
      case Variant::kMedianLoss:
        oc.scheme = median_loss_scheme(config.mkl_k);
        break;
    }

    const Vec w0 = Vec::Zero(dataset.dimension());
    const Trajectory traj = run(dataset, oc, w0);

    // Shared held-out clean test split per seed, so every variant and epsilon
    // of one seed faces the same test set.
    const auto& test_points = test_sets[task.data_index % config.seeds.size()];
    const int num_classes = config.spec.class_count;

    TaskResult res;
    int correct = 0;
    for (const auto& p : test_points)
      if (predict_class(traj.ema_w, p.x, num_classes) == p.label)
        ++correct;
    res.accuracy =
        100.0 * static_cast<double>(correct) / test_points.size();
    res.train_loss = mean_loss(dataset.components, traj.ema_w);
    res.test_loss =
        mean_loss_points(test_points, num_classes, traj.ema_w);

    if (config.series_points > 0 && !traj.points.empty()) {
      const int stride = std::max(
          1, static_cast<int>(traj.points.size()) / config.series_points);
      for (size_t pi = 0; pi < traj.points.size(); pi += stride) {
        const auto& pt = traj.points[pi];
        SeriesPoint sp;
        sp.step = pt.step;
        sp.train_loss = mean_loss(dataset.components, pt.ema);
        sp.test_loss = mean_loss_points(test_points, num_classes, pt.ema);
        res.series.push_back(sp);
      }
    }
    results[i] = std::move(res);
  });

  // Reduce per-seed results into the cells.
  std::vector<int> counts(cells.size(), 0);
  for (size_t i = 0; i < tasks.size(); ++i) {
    auto& cell = cells[tasks[i].cell_index];
    auto& res = results[i];
    cell.accuracies[counts[tasks[i].cell_index]] = res.accuracy;
    cell.train_loss_final += res.train_loss;
    cell.test_loss_final += res.test_loss;
    if (cell.series.empty()) {
      cell.series = res.series;
    } else {
      for (size_t p = 0; p < cell.series.size() && p < res.series.size(); ++p) {
        cell.series[p].train_loss += res.series[p].train_loss;
        cell.series[p].test_loss += res.series[p].test_loss;
      }
    }
    ++counts[tasks[i].cell_index];
  }
  for (size_t ci = 0; ci < cells.size(); ++ci) {
    auto& cell = cells[ci];
    const double m = static_cast<double>(counts[ci]);
    cell.train_loss_final /= m;
    cell.test_loss_final /= m;
    double sum = 0.0;
    for (double a : cell.accuracies) sum += a;
    cell.accuracy_mean = sum / m;
    double ss = 0.0;
    for (double a : cell.accuracies)
      ss += (a - cell.accuracy_mean) * (a - cell.accuracy_mean);
    cell.accuracy_std = m > 1 ? std::sqrt(ss / (m - 1)) : 0.0;
    for (auto& sp : cell.series) {
      sp.train_loss /= m;
      sp.test_loss /= m;
    }
  }
  return cells;
}

std::string accuracy_to_csv(
    const std::vector<ClassificationCellResult>& cells) {
  std::ostringstream out;
  out << "# " << kAccuracySchema << "\n" << kAccuracyHeader << "\n";
  for (const auto& c : cells) {
    out << fmt_coord(c.epsilon) << ',' << variant_name(c.variant) << ','
        << c.accuracies.size() << ',' << fmt(c.accuracy_mean) << ','
        << fmt(c.accuracy_std) << ',' << fmt(c.train_loss_final) << ','
        << fmt(c.test_loss_final) << "\n";
  }
  return out.str();
}

std::string series_to_csv(const std::vector<ClassificationCellResult>& cells) {
  std::ostringstream out;
  out << "# " << kSeriesSchema << "\n" << kSeriesHeader << "\n";
  for (const auto& c : cells)
    for (const auto& sp : c.series)
      out << fmt_coord(c.epsilon) << ',' << variant_name(c.variant) << ','
          << sp.step << ',' << fmt(sp.train_loss) << ',' << fmt(sp.test_loss)
          << "\n";
  return out.str();
}

// --- config loaders --------------------------------------------------------

namespace {

OutlierResponseRule outlier_rule_from(const std::string& name,
                                      const ConfigFile& cfg) {
  if (name == "shifted") return OutlierResponseRule::kShiftedModel;
  if (name == "standard-normal") return OutlierResponseRule::kStandardNormal;
  throw ConfigError(cfg.source(), 0, "unknown outlier_rule '" + name + "'");
}

LabelNoiseModel noise_model_from(const std::string& name,
                                 const ConfigFile& cfg) {
  if (name == "directed") return LabelNoiseModel::kDirected;
  if (name == "random") return LabelNoiseModel::kRandom;
  throw ConfigError(cfg.source(), 0, "unknown noise_model '" + name + "'");
}

RegressionSpec load_regression_spec(ConfigFile& cfg) {
  RegressionSpec spec;
  spec.d = cfg.get_int("problem", "d", spec.d);
  spec.n = cfg.get_int("problem", "n", spec.n);
  spec.kappa = cfg.get_double("problem", "kappa", spec.kappa);
  spec.epsilon = cfg.get_double("problem", "epsilon", spec.epsilon);
  spec.noise_sigma = cfg.get_double("problem", "noise_sigma", spec.noise_sigma);
  spec.outlier_shift =
      cfg.get_double("problem", "outlier_shift", spec.outlier_shift);
  spec.outlier_rule =
      outlier_rule_from(cfg.get_string("problem", "outlier_rule", "shifted"), cfg);
  spec.seed = cfg.get_seed_list("problem", "seed", {0}).front();
  return spec;
}

QuadraticEnsembleSpec load_quadratic_spec(ConfigFile& cfg) {
  QuadraticEnsembleSpec spec;
  spec.d = cfg.get_int("problem", "d", spec.d);
  spec.n = cfg.get_int("problem", "n", spec.n);
  spec.epsilon = cfg.get_double("problem", "epsilon", spec.epsilon);
  spec.l_min = cfg.get_double("problem", "l_min", spec.l_min);
  spec.l_max = cfg.get_double("problem", "l_max", spec.l_max);
  spec.radius_min = cfg.get_double("problem", "radius_min", spec.radius_min);
  spec.radius_max = cfg.get_double("problem", "radius_max", spec.radius_max);
  spec.clean_spread =
      cfg.get_double("problem", "clean_spread", spec.clean_spread);
  spec.target = cfg.get_double_list("problem", "target", {});
  if (cfg.has("problem", "outlier_center")) {
    const auto center = cfg.get_double_list("problem", "outlier_center", {});
    spec.outlier_centers.push_back(
        Eigen::Map<const Vec>(center.data(), center.size()));
  }
  spec.seed = cfg.get_seed_list("problem", "seed", {0}).front();
  return spec;
}

ClassificationSpec load_classification_spec(ConfigFile& cfg) {
  ClassificationSpec spec;
  spec.d = cfg.get_int("problem", "d", spec.d);
  spec.n = cfg.get_int("problem", "n", spec.n);
  spec.class_count = cfg.get_int("problem", "classes", spec.class_count);
  spec.blob_separation =
      cfg.get_double("problem", "blob_separation", spec.blob_separation);
  spec.epsilon = cfg.get_double("problem", "epsilon", spec.epsilon);
  spec.noise_model = noise_model_from(
      cfg.get_string("problem", "noise_model", "directed"), cfg);
  spec.seed = cfg.get_seed_list("problem", "seed", {0}).front();
  return spec;
}

}  // namespace

OptimizerDefaults load_optimizer_defaults(ConfigFile& cfg) {
  OptimizerDefaults d;
  d.eta = cfg.get_double("optimizer", "eta", d.eta);
  d.eta_decay_factor =
      cfg.get_double("optimizer", "eta_decay_factor", d.eta_decay_factor);
  d.eta_decay_period =
      cfg.get_int("optimizer", "eta_decay_period", d.eta_decay_period);
  d.max_steps = cfg.get_int("optimizer", "max_steps", d.max_steps);
  d.ema_decay = cfg.get_double("optimizer", "ema_decay", d.ema_decay);
  d.record_every = cfg.get_int("optimizer", "record_every", d.record_every);
  d.stop_on_plateau =
      cfg.get_bool("optimizer", "stop_on_plateau", d.stop_on_plateau);
  return d;
}

SweepConfig load_sweep_config(ConfigFile& cfg) {
  SweepConfig config;
  config.family = cfg.get_string("problem", "family", "regression");
  if (config.family == "regression") {
    config.regression = load_regression_spec(cfg);
    config.epsilons = {config.regression.epsilon};
    config.kappas = {config.regression.kappa};
    config.noise_sigmas = {config.regression.noise_sigma};
    config.ds = {config.regression.d};
  } else if (config.family == "quadratic") {
    config.quadratic = load_quadratic_spec(cfg);
    config.epsilons = {config.quadratic.epsilon};
    config.kappas = {1.0};
    config.noise_sigmas = {0.0};
    config.ds = {config.quadratic.d};
  } else {
    throw ConfigError(cfg.source(), 0,
                      "unknown family '" + config.family + "'");
  }
  config.epsilons = cfg.get_double_list("grid", "epsilon", config.epsilons);
  config.kappas = cfg.get_double_list("grid", "kappa", config.kappas);
  config.noise_sigmas =
      cfg.get_double_list("grid", "noise_sigma", config.noise_sigmas);
  config.ks = cfg.get_int_list("grid", "k", config.ks);
  config.ds = cfg.get_int_list("grid", "d", config.ds);
  const auto names = cfg.get_string_list("grid", "variant", {"sgd", "mkl"});
  config.variants.clear();
  for (const auto& name : names)
    config.variants.push_back(variant_from_name(name));
  config.seeds = cfg.get_seed_list("sweep", "seeds", {});
  config.threads = cfg.get_int("sweep", "threads", 0);
  config.optimizer = load_optimizer_defaults(cfg);
  return config;
}

Dataset load_problem_dataset(ConfigFile& cfg) {
  const std::string family = cfg.get_string("problem", "family", "regression");
  if (family == "regression") return gen_regression(load_regression_spec(cfg));
  if (family == "quadratic")
    return gen_quadratic_ensemble(load_quadratic_spec(cfg));
  if (family == "classification")
    return gen_classification(load_classification_spec(cfg));
  throw ConfigError(cfg.source(), 0, "unknown family '" + family + "'");
}

ClassificationBenchmarkConfig load_classification_config(ConfigFile& cfg) {
  ClassificationBenchmarkConfig config;
  const std::string family =
      cfg.get_string("problem", "family", "classification");
  if (family != "classification")
    throw ConfigError(cfg.source(), 0,
                      "classify needs family = classification");
  config.spec = load_classification_spec(cfg);
  config.epsilons =
      cfg.get_double_list("classify", "epsilon", {config.spec.epsilon});
  const auto names = cfg.get_string_list("classify", "variant",
                                         {"sgd", "mkl", "oracle"});
  config.variants.clear();
  for (const auto& name : names)
    config.variants.push_back(variant_from_name(name));
  config.mkl_k = cfg.get_int("classify", "mkl_k", config.mkl_k);
  config.mkl_alpha = cfg.get_double("classify", "mkl_alpha", config.mkl_alpha);
  config.seeds = cfg.get_seed_list("classify", "seeds", config.seeds);
  config.n_test = cfg.get_int("classify", "n_test", config.n_test);
  config.series_points =
      cfg.get_int("classify", "series_points", config.series_points);
  config.threads = cfg.get_int("classify", "threads", 0);
  config.optimizer = load_optimizer_defaults(cfg);
  return config;
}

}  // namespace minkloss
