#include "minkloss/optimizer.hpp"

#include <cmath>

#include "minkloss/errors.hpp"

namespace minkloss {

double StepSchedule::at(int t) const {
  if (decay_period <= 0 || decay_factor == 1.0) return initial;
  const int periods = t / decay_period;
  return initial / std::pow(decay_factor, periods);
}

double Trajectory::final_distance() const {
  return points.empty() ? std::numeric_limits<double>::quiet_NaN()
                        : points.back().dist;
}

double Trajectory::final_ema_distance() const {
  return points.empty() ? std::numeric_limits<double>::quiet_NaN()
                        : points.back().ema_dist;
}

int Trajectory::plateau_step() const {
  if (points.empty() || !std::isfinite(points.back().ema_dist)) return -1;
  const double cut = points.back().ema_dist * 1.001 + 1e-12;
  for (const auto& p : points)
    if (p.ema_dist <= cut) return p.step;
  return points.back().step;
}

Trajectory run(const Dataset& dataset, const OptimizerConfig& config,
               const Vec& w0) {
  if (dataset.components.empty()) throw InvalidInput("run: empty dataset");
  if (w0.size() != dataset.dimension())
    throw InvalidInput("run: initial point dimension mismatch");
  if (!(config.step.initial > 0.0))
    throw InvalidInput("run: step size must be positive");
  if (config.max_steps < 0) throw InvalidInput("run: negative max_steps");
  if (config.record_every < 1) throw InvalidInput("run: record_every < 1");
  if (config.ema_decay < 0.0 || config.ema_decay >= 1.0)
    throw InvalidInput("run: ema_decay must lie in [0, 1)");

  // Oracle runs sample from the clean pool only; a run on the epsilon = 0
  // sub-dataset with the same seed reproduces them draw for draw.
  std::vector<int> pool;
  if (config.oracle_mode) {
    pool = dataset.clean_indices();
    if (pool.empty()) throw InvalidInput("run: oracle_mode with no clean samples");
  } else {
    pool.resize(dataset.n());
    for (int i = 0; i < dataset.n(); ++i) pool[i] = i;
  }
  const int pool_n = static_cast<int>(pool.size());
  const bool batched =
      config.scheme.batch_fraction < 1.0 || config.batch_keep_all;
  // Batched steps draw their k-set without replacement.
  SelectionScheme draw_scheme = config.scheme;
  if (batched) draw_scheme.with_replacement = false;
  draw_scheme.validate(pool_n);

  const bool have_target = dataset.target.size() == w0.size();
  const double beta = config.ema_decay;

  Rng rng(config.seed);
  Trajectory traj;
  Vec w = w0;
  Vec ema_sum = Vec::Zero(w.size());
  double ema_norm = 0.0;

  auto record = [&](int step, int chosen, std::vector<int> chosen_set,
                    double loss) {
    ema_sum = beta * ema_sum + w;
    ema_norm = beta * ema_norm + 1.0;
    TrajectoryPoint p;
    p.step = step;
    p.w = w;
    p.ema = ema_sum / ema_norm;
    p.chosen = chosen;
    p.chosen_set = std::move(chosen_set);
    p.loss = loss;
    if (have_target) {
      p.dist = (w - dataset.target).norm();
      p.ema_dist = (p.ema - dataset.target).norm();
    }
    traj.points.push_back(std::move(p));
  };

  record(0, -1, {}, std::numeric_limits<double>::quiet_NaN());

  std::vector<int> drawn_pool;      // positions within the pool
  std::vector<int> drawn;           // component indices
  std::vector<double> drawn_losses;

  for (int t = 1; t <= config.max_steps; ++t) {
    const double eta = config.step.at(t - 1);
    drawn_pool = draw_indices(pool_n, draw_scheme, rng);
    drawn.resize(drawn_pool.size());
    drawn_losses.resize(drawn_pool.size());
    for (size_t j = 0; j < drawn_pool.size(); ++j) {
      drawn[j] = pool[drawn_pool[j]];
      drawn_losses[j] = dataset.components[drawn[j]].value(w);
    }
    traj.loss_evaluations += static_cast<std::int64_t>(drawn.size());

    int chosen = -1;
    std::vector<int> kept;
    double step_loss = 0.0;
    if (batched) {
      kept = lowest_by_loss(drawn, drawn_losses, config.scheme.batch_size());
      Vec g = Vec::Zero(w.size());
      for (int i : kept) {
        g += dataset.components[i].gradient(w);
        step_loss += dataset.components[i].value(w);
      }
      g /= static_cast<double>(kept.size());
      step_loss /= static_cast<double>(kept.size());
      w -= eta * g;
    } else {
      chosen = pick_by_order(drawn, drawn_losses, config.scheme.order_index);
      step_loss = dataset.components[chosen].value(w);
      w -= eta * dataset.components[chosen].gradient(w);
    }
    traj.steps_taken = t;

    if (!w.allFinite() || w.norm() > config.divergence_norm) {
      traj.diverged = true;
      traj.diverged_step = t;
      record(t, chosen, std::move(kept), step_loss);
      break;
    }

    if (t % config.record_every == 0 || t == config.max_steps) {
      record(t, chosen, std::move(kept), step_loss);
      if (config.stop_on_plateau && have_target &&
          t >= config.plateau_window) {
        // Compare against the recorded point at least plateau_window back.
        const auto& pts = traj.points;
        for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {
          if (pts.back().step - it->step >= config.plateau_window) {
            if (it->ema_dist - pts.back().ema_dist <
                config.plateau_tolerance) {
              traj.stopped_on_plateau = true;
            }
            break;
          }
        }
        if (traj.stopped_on_plateau) break;
      }
    }
  }

  traj.final_w = w;
  traj.ema_w = ema_norm > 0.0 ? Vec(ema_sum / ema_norm) : w;
  return traj;
}

Vec ema_readout(const Trajectory& trajectory, double decay) {
  if (trajectory.points.empty())
    throw InvalidInput("ema_readout: empty trajectory");
  if (decay < 0.0 || decay >= 1.0)
    throw InvalidInput("ema_readout: decay must lie in [0, 1)");
  Vec sum = Vec::Zero(trajectory.points.front().w.size());
  double norm = 0.0;
  for (const auto& p : trajectory.points) {
    sum = decay * sum + p.w;
    norm = decay * norm + 1.0;
  }
  return sum / norm;
}

double error_to_target(const Vec& w, const Vec& target) {
  if (w.size() != target.size())
    throw InvalidInput("error_to_target: dimension mismatch");
  return (w - target).norm();
}

}  // namespace minkloss
