#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "minkloss/config.hpp"
#include "minkloss/datagen.hpp"
#include "minkloss/optimizer.hpp"
#include "minkloss/theory.hpp"

namespace minkloss {

enum class Variant { kSgd, kMkl, kMedianLoss, kOracle };

std::string variant_name(Variant v);
Variant variant_from_name(const std::string& name);

// One grid point of a sweep.
struct SweepCell {
  std::string family = "regression";
  int d = 10;
  int n = 100;
  double kappa = 1.0;
  double epsilon = 0.0;
  double noise_sigma = 0.0;
  int k = 2;
  Variant variant = Variant::kMkl;
};

std::string cell_key(const SweepCell& cell);

struct RunRecord {
  SweepCell cell;
  std::uint64_t seed = 0;
  double distance_ema = 0.0;
  double distance_final = 0.0;
  bool converged = true;  // false for diverged runs
  int steps = 0;
  int plateau_step = -1;
  std::int64_t loss_evals = 0;
  double wall_ms = 0.0;  // in-memory only; timing never enters data payloads
};

struct OptimizerDefaults {
  double eta = 0.0;  // 0 selects 1 / (2 sup L_i) per dataset
  double eta_decay_factor = 1.0;
  int eta_decay_period = 0;
  int max_steps = 20000;
  double ema_decay = 0.99;
  int record_every = 10;
  bool stop_on_plateau = false;
};

struct SweepConfig {
  std::string family = "regression";  // regression | quadratic
  RegressionSpec regression;
  QuadraticEnsembleSpec quadratic;
  // Grid axes; the cartesian product times variants times seeds is executed.
  std::vector<double> epsilons{0.2};
  std::vector<double> kappas{1.0};
  std::vector<double> noise_sigmas{0.0};
  std::vector<int> ks{2};
  std::vector<int> ds{10};
  std::vector<Variant> variants{Variant::kSgd, Variant::kMkl};
  std::vector<std::uint64_t> seeds;  // empty selects 0..20
  OptimizerDefaults optimizer;
  int threads = 0;  // 0 = hardware concurrency
};

// Builds the optimizer configuration a variant uses inside sweeps and
// benchmarks (sgd: k = 1; median-loss: order_index = ceil(k/2); oracle:
// k = 1 on the clean pool).
OptimizerConfig variant_optimizer_config(Variant variant, int k,
                                         const OptimizerDefaults& defaults,
                                         const Dataset& dataset,
                                         std::uint64_t run_seed);

// Executes the full grid x seeds with independent, variant-agnostic RNG
// streams; deterministic record order. Diverged runs are recorded with
// converged = false, never aborted on.
std::vector<RunRecord> run_sweep(const SweepConfig& config);

struct CellStats {
  int count = 0;
  int diverged = 0;
  double median = 0.0;
  double mean = 0.0;
  double stddev = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
};

struct CellSummary {
  SweepCell cell;
  CellStats stats;
};

// Per-cell statistics of distance_ema over seeds, in first-appearance order.
// Diverged runs are counted separately and excluded from the statistics.
std::vector<CellSummary> summarize(const std::vector<RunRecord>& records);

inline constexpr const char* kRunRecordSchema = "minkloss.runrecord.v1";
inline constexpr const char* kRunRecordHeader =
    "family,d,n,kappa,epsilon,noise_sigma,k,variant,seed,distance_ema,"
    "distance_final,converged,steps,plateau_step,loss_evals";
inline constexpr const char* kSummarySchema = "minkloss.summary.v1";
inline constexpr const char* kSummaryHeader =
    "family,d,n,kappa,epsilon,noise_sigma,k,variant,count,diverged,median,"
    "mean,stddev,q25,q75";
inline constexpr const char* kScanSchema = "minkloss.scan.v1";
inline constexpr const char* kScanHeader =
    "t,value,directional_derivative,ordering_signature";

std::string records_to_csv(const std::vector<RunRecord>& records);
std::string summaries_to_csv(const std::vector<CellSummary>& summaries);
std::string scan_to_csv(const std::vector<ScanRow>& rows);

// --- classification benchmark -------------------------------------------

struct ClassificationBenchmarkConfig {
  ClassificationSpec spec;  // epsilon is overridden by the grid below
  std::vector<double> epsilons{0.3};
  std::vector<Variant> variants{Variant::kSgd, Variant::kMkl, Variant::kOracle};
  int mkl_k = 10;
  double mkl_alpha = 0.5;
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
  OptimizerDefaults optimizer;
  int n_test = 20000;
  int series_points = 0;  // loss-curve samples per run (0 = none)
  int threads = 0;
};

struct SeriesPoint {
  int step = 0;
  double train_loss = 0.0;
  double test_loss = 0.0;
};

struct ClassificationCellResult {
  double epsilon = 0.0;
  Variant variant = Variant::kSgd;
  std::vector<double> accuracies;  // clean-test accuracy per seed
  double accuracy_mean = 0.0;
  double accuracy_std = 0.0;
  double train_loss_final = 0.0;  // corrupted-train loss at the EMA readout
  double test_loss_final = 0.0;   // clean-test loss at the EMA readout
  std::vector<SeriesPoint> series;  // seed-averaged
};

std::vector<ClassificationCellResult> classification_benchmark(
    const ClassificationBenchmarkConfig& config);

inline constexpr const char* kAccuracySchema = "minkloss.accuracy.v1";
inline constexpr const char* kAccuracyHeader =
    "epsilon,variant,seeds,accuracy_mean,accuracy_std,train_loss_final,"
    "test_loss_final";
inline constexpr const char* kSeriesSchema = "minkloss.series.v1";
inline constexpr const char* kSeriesHeader =
    "epsilon,variant,step,train_loss,test_loss";

std::string accuracy_to_csv(const std::vector<ClassificationCellResult>&);
std::string series_to_csv(const std::vector<ClassificationCellResult>&);

// --- config-file loaders (consume their sections; callers run
// require_consumed() after reading everything they need) -------------------

SweepConfig load_sweep_config(ConfigFile& cfg);
Dataset load_problem_dataset(ConfigFile& cfg);  // [problem]
OptimizerDefaults load_optimizer_defaults(ConfigFile& cfg);
ClassificationBenchmarkConfig load_classification_config(ConfigFile& cfg);

}  // namespace minkloss
