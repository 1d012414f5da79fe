#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "minkloss/errors.hpp"
#include "minkloss/experiments.hpp"
#include "minkloss/serialize.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace minkloss;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

Vec vec_from(const std::vector<double>& values) {
  return Eigen::Map<const Vec>(values.data(),
                               static_cast<Eigen::Index>(values.size()));
}

int cmd_probabilities(int n, int k, bool without_replacement, int order_index,
                      const std::string& out_path) {
  SelectionScheme scheme;
  scheme.k = k;
  scheme.with_replacement = !without_replacement;
  scheme.order_index = order_index;
  const auto dist = rank_probabilities(n, scheme);
  std::ostringstream out;
  out << "# minkloss.probabilities.v1\nrank,probability\n";
  char buf[40];
  for (int r = 0; r < n; ++r) {
    std::snprintf(buf, sizeof buf, "%.17g", dist.probs[r]);
    out << (r + 1) << ',' << buf << "\n";
  }
  std::cout << out.str();
  if (!out_path.empty()) write_file_atomic(out_path, out.str());
  return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir,
              int threads, const std::vector<std::uint64_t>& seeds) {
  ConfigFile cfg = ConfigFile::parse_file(config_path);
  SweepConfig config = load_sweep_config(cfg);
  cfg.require_consumed();
  if (threads > 0) config.threads = threads;
  if (!seeds.empty()) config.seeds = seeds;

  const auto records = run_sweep(config);
  const auto summaries = summarize(records);
  fs::create_directories(out_dir);
  write_file_atomic((fs::path(out_dir) / "records.csv").string(),
                    records_to_csv(records));
  write_file_atomic((fs::path(out_dir) / "summary.csv").string(),
                    summaries_to_csv(summaries));
  std::cerr << "sweep: " << records.size() << " runs -> " << out_dir << "\n";
  return kExitOk;
}

int cmd_landscape(const std::string& config_path, const std::string& out_path,
                  const std::string& stationary_path) {
  ConfigFile cfg = ConfigFile::parse_file(config_path);
  const Dataset dataset = load_problem_dataset(cfg);

  SelectionScheme scheme =
      min_k_scheme(cfg.get_int("landscape", "k", 2),
                   cfg.get_bool("landscape", "with_replacement", true));
  const int grid_points = cfg.get_int("landscape", "grid_points", 201);
  const auto a_values = cfg.get_double_list("landscape", "a", {});
  const auto b_values = cfg.get_double_list("landscape", "b", {});
  const double tol = cfg.get_double("landscape", "tol", 0.0);  // 0 = per-kind default
  const int max_iters = cfg.get_int("landscape", "max_iters", 1000000);
  const auto init_values = cfg.get_double_list("landscape", "stationary_init", {});
  cfg.require_consumed();
  if (a_values.empty() || b_values.empty())
    throw ConfigError(config_path, 0, "landscape needs 'a' and 'b' endpoints");

  const auto rows =
      scan_line(dataset, vec_from(a_values), vec_from(b_values), grid_points,
                scheme);
  write_file_atomic(out_path, scan_to_csv(rows));
  std::cerr << "landscape: " << rows.size() << " grid points -> " << out_path
            << "\n";

  if (!init_values.empty() || !stationary_path.empty()) {
    const Vec w0 = init_values.empty() ? vec_from(a_values) : vec_from(init_values);
    const auto report = find_stationary_point(dataset, w0, scheme, tol, max_iters);
    json j{{"schema", "minkloss.stationary.v1"},
           {"converged", report.converged},
           {"iterations", report.iterations},
           {"surrogate_gradient_norm", report.surrogate_gradient_norm},
           {"top_ranks_clean", report.top_ranks_clean},
           {"point", std::vector<double>(report.point.data(),
                                         report.point.data() + report.point.size())}};
    const std::string path =
        stationary_path.empty() ? out_path + ".stationary.json" : stationary_path;
    write_file_atomic(path, j.dump(2) + "\n");
    std::cerr << "landscape: stationary report -> " << path << "\n";
  }
  return kExitOk;
}

int cmd_theory_check(const std::string& config_path,
                     const std::string& out_path) {
  ConfigFile cfg = ConfigFile::parse_file(config_path);
  const Dataset dataset = load_problem_dataset(cfg);

  const int k = cfg.get_int("theory", "k", 2);
  const int steps = cfg.get_int("theory", "steps", 100);
  const double eta_cfg = cfg.get_double("theory", "eta", 0.0);
  const std::uint64_t traj_seed = cfg.get_seed_list("theory", "seed", {0}).front();
  const auto init_values = cfg.get_double_list("theory", "init", {});
  double lambda_est = cfg.get_double("theory", "lambda_est", 0.0);
  const double tol = cfg.get_double("theory", "tol", 0.0);  // 0 = per-kind default
  cfg.require_consumed();

  const Vec init = init_values.empty() ? dataset.target : vec_from(init_values);
  const double eta = eta_cfg > 0.0 ? eta_cfg : default_step_size(dataset);
  const SelectionScheme scheme = min_k_scheme(k);
  if (lambda_est <= 0.0) {
    const auto pc = dataset_constants(dataset);
    lambda_est = naive_lambda(dataset.n(), scheme, pc.lambda_F);
  }

  const auto sgd = find_stationary_point(dataset, init, min_k_scheme(1), tol);
  const auto mkl = find_stationary_point(dataset, init, scheme, tol);
  const BoundReport bounds =
      check_bounds(sgd.point, mkl.point, dataset, k, lambda_est);

  OptimizerConfig oc;
  oc.scheme = scheme;
  oc.step.initial = eta;
  oc.max_steps = steps;
  oc.record_every = 1;
  oc.seed = traj_seed;
  const Trajectory traj = run(dataset, oc, init);

  json step_checks = json::array();
  bool all_hold = true;
  for (const auto& point : traj.points) {
    const StepBoundReport report =
        exact_expected_step(dataset, point.w, eta, scheme);
    json j = report;
    j["step"] = point.step;
    all_hold = all_hold && report.holds;
    step_checks.push_back(std::move(j));
  }

  json doc{{"schema", "minkloss.theorycheck.v1"},
           {"k", k},
           {"eta", eta},
           {"lambda_est", lambda_est},
           {"sgd_converged", sgd.converged},
           {"mkl_converged", mkl.converged},
           {"bound_report", bounds},
           {"step_checks", std::move(step_checks)},
           {"all_steps_hold", all_hold}};
  write_file_atomic(out_path, doc.dump(2) + "\n");
  std::cerr << "theory-check: " << traj.points.size() << " steps -> "
            << out_path << "\n";
  return kExitOk;
}

int cmd_classify(const std::string& config_path, const std::string& out_dir,
                 int threads, const std::vector<std::uint64_t>& seeds) {
  ConfigFile cfg = ConfigFile::parse_file(config_path);
  ClassificationBenchmarkConfig config = load_classification_config(cfg);
  cfg.require_consumed();
  if (threads > 0) config.threads = threads;
  if (!seeds.empty()) config.seeds = seeds;

  const auto results = classification_benchmark(config);
  fs::create_directories(out_dir);
  write_file_atomic((fs::path(out_dir) / "accuracy.csv").string(),
                    accuracy_to_csv(results));
  if (config.series_points > 0)
    write_file_atomic((fs::path(out_dir) / "series.csv").string(),
                      series_to_csv(results));
  std::cerr << "classify: " << results.size() << " cells -> " << out_dir
            << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Min-k-loss SGD: selection probabilities, landscape scans, "
               "bound checks and experiment sweeps"};
  app.require_subcommand(1);

  int n = 0, k = 2, order_index = 1;
  bool without_replacement = false;
  std::string out_path, config_path, out_dir, stationary_path;
  int threads = 0;
  std::vector<std::uint64_t> seeds;

  auto* prob = app.add_subcommand("probabilities",
                                  "Print rank selection probabilities");
  prob->add_option("--n", n, "number of samples")->required();
  prob->add_option("--k", k, "draws per step");
  prob->add_flag("--without-replacement", without_replacement,
                 "draw the k samples without replacement");
  prob->add_flag("--with-replacement", "draw with replacement (default)");
  prob->add_option("--order-index", order_index, "order statistic to pick");
  prob->add_option("--out", out_path, "also write CSV here");

  auto* sweep = app.add_subcommand("sweep", "Run a grid sweep from a config");
  sweep->add_option("--config", config_path)->required();
  sweep->add_option("--out", out_dir, "output directory")->required();
  sweep->add_option("--threads", threads);
  sweep->add_option("--seed", seeds, "override the config seed list");

  auto* land = app.add_subcommand("landscape",
                                  "Scan the surrogate loss along a segment");
  land->add_option("--config", config_path)->required();
  land->add_option("--out", out_path, "scan CSV path")->required();
  land->add_option("--stationary-json", stationary_path);

  auto* theory = app.add_subcommand(
      "theory-check", "Evaluate the landscape bounds on a problem instance");
  theory->add_option("--config", config_path)->required();
  theory->add_option("--out", out_path, "JSON report path")->required();

  auto* classify = app.add_subcommand(
      "classify", "Label-noise classification benchmark");
  classify->add_option("--config", config_path)->required();
  classify->add_option("--out", out_dir, "output directory")->required();
  classify->add_option("--threads", threads);
  classify->add_option("--seed", seeds, "override the config seed list");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (prob->parsed())
      return cmd_probabilities(n, k, without_replacement, order_index,
                               out_path);
    if (sweep->parsed()) return cmd_sweep(config_path, out_dir, threads, seeds);
    if (land->parsed())
      return cmd_landscape(config_path, out_path, stationary_path);
    if (theory->parsed()) return cmd_theory_check(config_path, out_path);
    if (classify->parsed())
      return cmd_classify(config_path, out_dir, threads, seeds);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UnsupportedClosedForm& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
