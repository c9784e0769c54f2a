#include "coact/train.hpp"

#include <cmath>
#include <stdexcept>

#include "coact/replay_buffer.hpp"

namespace coact {

void Protocol::validate() const {
  if (iterations == 0) throw std::invalid_argument("protocol: iterations must be >= 1");
}

std::optional<std::size_t> RunRecord::first_iteration_reaching(double target) const {
  for (const auto& it : iterations)
    if (it.eval_return >= target) return it.iteration;
  return std::nullopt;
}

bool operator==(const RunRecord& x, const RunRecord& y) {
  if (x.iterations.size() != y.iterations.size()) return false;
  for (std::size_t i = 0; i < x.iterations.size(); ++i) {
    const auto& a = x.iterations[i];
    const auto& b = y.iterations[i];
    const bool td_equal = (std::isnan(a.mean_td) && std::isnan(b.mean_td)) || a.mean_td == b.mean_td;
    if (a.iteration != b.iteration || a.eval_return != b.eval_return || !td_equal ||
        a.env_steps != b.env_steps)
      return false;
  }
  return true;
}

namespace {

double mean_or_nan(double sum, std::size_t n) {
  return n == 0 ? std::numeric_limits<double>::quiet_NaN() : sum / static_cast<double>(n);
}

}  // namespace

RunRecord train_tabular(const Mdp& mdp, const TabularTrainConfig& cfg,
                        const StrategyConfig& strategy, Rng& rng) {
  cfg.protocol.validate();
  cfg.learner.validate();
  strategy.validate();
  const std::size_t ns = mdp.num_states();
  const std::size_t na = mdp.num_actions();

  Rng init_rng(cfg.init_seed);
  QTable table_a = init_qtable(ns, na, cfg.learner.init_mu, cfg.learner.init_sigma, init_rng);
  QTable table_b(ns, na);
  if (cfg.kind == TabularKind::DoubleQ)
    table_b = init_qtable(ns, na, cfg.learner.init_mu, cfg.learner.init_sigma, init_rng);
  QuantileTable quantiles(ns, na, cfg.kind == TabularKind::Quantile ? cfg.num_quantiles : 1);
  if (cfg.kind == TabularKind::Quantile) {
    // Every location of a pair starts at the same draw, so the initial mean
    // has the same Normal(mu, sigma^2) law as the other learners.
    for (StateIndex s = 0; s < ns; ++s)
      for (ActionIndex a = 0; a < na; ++a)
        for (double& z : quantiles.locations(s, a)) z = table_a(s, a);
  }

  VisitCounts counts(ns, na);
  RunRecord record;
  StateIndex s = mdp.initial_state();
  std::uint64_t env_steps = 0;

  auto collect_and_learn = [&](auto&& values, auto&& learn) {
    const Transition t = collect_step(strategy, values, mdp, s, counts, rng);
    s = t.s_next;
    ++env_steps;
    return learn(t);
  };

  for (std::size_t it = 1; it <= cfg.protocol.iterations; ++it) {
    if (cfg.protocol.reset_each_iteration) s = mdp.initial_state();
    double td_sum = 0.0;
    for (std::size_t k = 0; k < cfg.protocol.train_steps; ++k) {
      switch (cfg.kind) {
        case TabularKind::QLearning:
          td_sum += collect_and_learn(table_a, [&](const Transition& t) {
            return q_update(table_a, t, cfg.learner);
          });
          break;
        case TabularKind::DoubleQ:
          td_sum += collect_and_learn(DoubleQView(table_a, table_b), [&](const Transition& t) {
            return double_q_update(table_a, table_b, t, cfg.learner, rng);
          });
          break;
        case TabularKind::Quantile:
          td_sum += collect_and_learn(quantiles, [&](const Transition& t) {
            return quantile_update(quantiles, t, cfg.learner);
          });
          break;
      }
    }
    double eval = 0.0;
    switch (cfg.kind) {
      case TabularKind::QLearning:
        eval = evaluate_greedy(mdp, table_a, cfg.protocol.eval_steps, rng);
        break;
      case TabularKind::DoubleQ:
        eval = evaluate_greedy(mdp, DoubleQView(table_a, table_b), cfg.protocol.eval_steps, rng);
        break;
      case TabularKind::Quantile:
        eval = evaluate_greedy(mdp, quantiles, cfg.protocol.eval_steps, rng);
        break;
    }
    record.iterations.push_back(
        {it, eval, mean_or_nan(td_sum, cfg.protocol.train_steps), env_steps});
  }
  return record;
}

void TrainConfig::validate() const {
  protocol.validate();
  init.validate();
  if (!(alpha > 0.0)) throw std::invalid_argument("train: alpha must be positive");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("train: gamma must lie in (0, 1]");
  if (batch_size == 0) throw std::invalid_argument("train: batch size must be positive");
  if (buffer_capacity < batch_size)
    throw std::invalid_argument("train: buffer capacity must be at least the batch size");
  if (hidden == 0) throw std::invalid_argument("train: hidden width must be positive");
  if (updates_per_step == 0) throw std::invalid_argument("train: updates per step must be >= 1");
  if (double_q && target_sync_period == 0)
    throw std::invalid_argument("train: target sync period must be positive");
}

TrainResult coact_train(const Mdp& mdp, const TrainConfig& cfg, const StrategyConfig& strategy,
                        Rng& rng, const CollectObserver& observer) {
  cfg.validate();
  strategy.validate();
  QNetwork online = init_network(cfg.init, {mdp.num_states(), cfg.hidden, mdp.num_actions()});
  QNetwork target = online;
  ReplayBuffer buffer(cfg.buffer_capacity);
  VisitCounts counts(mdp.num_states(), mdp.num_actions());

  RunRecord record;
  StateIndex s = mdp.initial_state();
  std::uint64_t env_steps = 0;
  std::uint64_t learn_steps = 0;

  for (std::size_t it = 1; it <= cfg.protocol.iterations; ++it) {
    if (cfg.protocol.reset_each_iteration) s = mdp.initial_state();
    double td_sum = 0.0;
    std::size_t td_count = 0;
    for (std::size_t k = 0; k < cfg.protocol.train_steps; ++k) {
      const Transition t = collect_step(strategy, online, mdp, s, counts, rng);
      if (observer) observer(t, online);
      buffer.push(t);
      s = t.s_next;
      ++env_steps;
      if (buffer.size() < cfg.batch_size) continue;
      for (std::size_t u = 0; u < cfg.updates_per_step && learn_steps < cfg.learning_steps; ++u) {
        const Batch batch = buffer.sample(cfg.batch_size, rng);
        td_sum += td_gradient_step(online, batch, cfg.gamma, cfg.alpha,
                                   cfg.double_q ? &target : nullptr);
        ++td_count;
        ++learn_steps;
        if (cfg.double_q && learn_steps % cfg.target_sync_period == 0) target = online;
      }
    }
    const double eval = evaluate_greedy(mdp, online, cfg.protocol.eval_steps, rng);
    record.iterations.push_back({it, eval, mean_or_nan(td_sum, td_count), env_steps});
  }
  return {std::move(record), std::move(online)};
}

}  // namespace coact
