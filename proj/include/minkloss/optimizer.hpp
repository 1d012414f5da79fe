#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "minkloss/losses.hpp"
#include "minkloss/sampling.hpp"

namespace minkloss {

// eta_t = initial / decay_factor^(number of completed periods).
struct StepSchedule {
  double initial = 0.1;
  double decay_factor = 1.0;
  int decay_period = 0;  // 0 disables decay

  double at(int t) const;  // t is the 0-based update counter
};

struct OptimizerConfig {
  SelectionScheme scheme;
  StepSchedule step;
  int max_steps = 10000;
  std::uint64_t seed = 0;
  double ema_decay = 0.99;  // beta in [0, 1); 0 degenerates to the last iterate
  int record_every = 1;
  bool oracle_mode = false;  // sample only from clean components
  // Mini-batch semantics even at batch_fraction = 1: average all k drawn
  // gradients instead of picking one (batch-SGD baselines).
  bool batch_keep_all = false;
  // Optional "stop once the error values stop decaying" rule: stop when the
  // EMA distance improves by less than plateau_tolerance over plateau_window
  // steps. Needs a target of matching dimension.
  bool stop_on_plateau = false;
  double plateau_tolerance = 1e-9;
  int plateau_window = 500;
  double divergence_norm = 1e8;
};

struct TrajectoryPoint {
  int step = 0;
  Vec w;
  Vec ema;                      // normalized EMA of recorded iterates so far
  int chosen = -1;              // component used for the update at this step
  std::vector<int> chosen_set;  // batched variant
  double loss = std::numeric_limits<double>::quiet_NaN();
  double dist = std::numeric_limits<double>::quiet_NaN();
  double ema_dist = std::numeric_limits<double>::quiet_NaN();
};

struct Trajectory {
  std::vector<TrajectoryPoint> points;
  Vec final_w;
  Vec ema_w;
  bool diverged = false;
  int diverged_step = -1;
  bool stopped_on_plateau = false;
  int steps_taken = 0;
  std::int64_t loss_evaluations = 0;

  double final_distance() const;
  double final_ema_distance() const;
  // First recorded step whose EMA distance is within 0.1% of the final one;
  // -1 when no distances were recorded.
  int plateau_step() const;
};

// Executes up to max_steps selection/update steps from w0. Deterministic in
// (dataset, config, w0, seed). k = 1 with order_index 1 is plain SGD.
Trajectory run(const Dataset& dataset, const OptimizerConfig& config,
               const Vec& w0);

// Exponentially weighted average of the recorded iterates:
// sum beta^(T-t) w_t / sum beta^(T-t).
Vec ema_readout(const Trajectory& trajectory, double decay);

double error_to_target(const Vec& w, const Vec& target);

}  // namespace minkloss
