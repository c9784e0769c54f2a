#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "coact/explore.hpp"
#include "coact/mdp.hpp"
#include "coact/network.hpp"
#include "coact/random.hpp"
#include "coact/tabular.hpp"

namespace coact {

/// Train-then-evaluate loop shared by every learner: each iteration runs
/// `train_steps` environment steps with learning, then evaluates the greedy
/// policy for `eval_steps` steps from the initial state.
struct Protocol {
  std::size_t iterations = 300;
  std::size_t train_steps = 100;
  std::size_t eval_steps = 100;
  /// Restart training interaction from the initial state every iteration.
  bool reset_each_iteration = true;

  void validate() const;
};

struct IterationMetrics {
  std::size_t iteration = 0;  // 1-based
  double eval_return = 0.0;
  double mean_td = std::numeric_limits<double>::quiet_NaN();  // NaN if nothing was learned
  std::uint64_t env_steps = 0;  // cumulative training steps

  friend bool operator==(const IterationMetrics&, const IterationMetrics&) = default;
};

struct RunRecord {
  std::vector<IterationMetrics> iterations;

  /// First iteration where eval_return >= target, if any.
  std::optional<std::size_t> first_iteration_reaching(double target) const;
  double final_return() const { return iterations.empty() ? 0.0 : iterations.back().eval_return; }

  friend bool operator==(const RunRecord& x, const RunRecord& y);
};

enum class TabularKind { QLearning, DoubleQ, Quantile };

struct TabularTrainConfig {
  Protocol protocol;
  LearnerConfig learner;
  TabularKind kind = TabularKind::QLearning;
  std::size_t num_quantiles = 8;
  std::uint64_t init_seed = 0;  // independent of the interaction stream
};

/// Online tabular learning: every collected transition is learned from
/// immediately. Initial values are Normal(init_mu, init_sigma^2) per entry.
RunRecord train_tabular(const Mdp& mdp, const TabularTrainConfig& cfg,
                        const StrategyConfig& strategy, Rng& rng);

struct TrainConfig {
  Protocol protocol;
  double alpha = 0.05;
  double gamma = 0.99;
  std::size_t buffer_capacity = 10000;
  std::size_t batch_size = 32;
  /// Total gradient-step budget across the run.
  std::uint64_t learning_steps = std::numeric_limits<std::uint64_t>::max();
  /// Gradient steps per environment step once the buffer holds `batch_size`.
  std::size_t updates_per_step = 1;
  bool double_q = false;
  std::size_t target_sync_period = 100;
  std::size_t hidden = 32;
  InitSpec init{InitFamily::Normal, 1.0, 0.025, 0.0, {}, 0};

  void validate() const;
};

struct TrainResult {
  RunRecord record;
  QNetwork online;
};

/// Called for every collected transition with the network that chose it.
using CollectObserver = std::function<void(const Transition&, const QNetwork&)>;

/// Replay-buffer TD learning with a small network. Collection follows
/// `strategy`; learning samples uniform batches and takes semi-gradient steps
/// on the squared TD. With double_q, a target copy evaluates the online
/// network's argmax and is refreshed every target_sync_period steps.
TrainResult coact_train(const Mdp& mdp, const TrainConfig& cfg, const StrategyConfig& strategy,
                        Rng& rng, const CollectObserver& observer = {});

}  // namespace coact
