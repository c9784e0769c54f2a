#include "coact/tabular.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace coact {

QTable::QTable(std::size_t num_states, std::size_t num_actions, double fill)
    : num_states_(num_states), num_actions_(num_actions), values_(num_states * num_actions, fill) {
  if (num_states == 0 || num_actions == 0)
    throw std::invalid_argument("QTable: dimensions must be positive");
}

QuantileTable::QuantileTable(std::size_t num_states, std::size_t num_actions,
                             std::size_t num_quantiles, double fill)
    : num_states_(num_states),
      num_actions_(num_actions),
      num_quantiles_(num_quantiles),
      locations_(num_states * num_actions * num_quantiles, fill) {
  if (num_states == 0 || num_actions == 0 || num_quantiles == 0)
    throw std::invalid_argument("QuantileTable: dimensions must be positive");
}

double QuantileTable::mean(StateIndex s, ActionIndex a) const {
  const auto z = locations(s, a);
  return std::accumulate(z.begin(), z.end(), 0.0) / static_cast<double>(z.size());
}

std::vector<double> QuantileTable::action_values(StateIndex s) const {
  std::vector<double> row(num_actions_);
  for (ActionIndex a = 0; a < num_actions_; ++a) row[a] = mean(s, a);
  return row;
}

std::vector<double> DoubleQView::action_values(StateIndex s) const {
  const auto ra = a_.action_values(s);
  const auto rb = b_.action_values(s);
  std::vector<double> row(ra.size());
  for (std::size_t i = 0; i < row.size(); ++i) row[i] = 0.5 * (ra[i] + rb[i]);
  return row;
}

void LearnerConfig::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (0, 1]");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in (0, 1]");
  if (!(init_sigma >= 0.0)) throw std::invalid_argument("init sigma must be non-negative");
}

QTable init_qtable(std::size_t num_states, std::size_t num_actions, double mu, double sigma,
                   Rng& rng) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("init_qtable: sigma must be non-negative");
  QTable table(num_states, num_actions, mu);
  if (sigma == 0.0) return table;
  std::normal_distribution<double> normal(mu, sigma);
  for (double& v : table.data()) v = normal(rng);
  return table;
}

ActionIndex greedy_action(const QTable& table, StateIndex s) {
  return argmax_action(table.action_values(s));
}

ActionIndex min_action(const QTable& table, StateIndex s) {
  return argmin_action(table.action_values(s));
}

namespace {

void check_transition(const Transition& t, std::size_t num_states, std::size_t num_actions) {
  if (t.s >= num_states || t.s_next >= num_states || t.a >= num_actions)
    throw std::invalid_argument("transition indices out of table bounds");
}

}  // namespace

double q_update(QTable& table, const Transition& t, const LearnerConfig& cfg) {
  check_transition(t, table.num_states(), table.num_actions());
  const double td = t.r + cfg.gamma * max_value(table.action_values(t.s_next)) - table(t.s, t.a);
  table(t.s, t.a) += cfg.alpha * td;
  return td;
}

double double_q_update(QTable& table_a, QTable& table_b, const Transition& t,
                       const LearnerConfig& cfg, DoubleQSide forced) {
  if (table_a.num_states() != table_b.num_states() ||
      table_a.num_actions() != table_b.num_actions())
    throw std::invalid_argument("double_q_update: table dimensions differ");
  check_transition(t, table_a.num_states(), table_a.num_actions());
  QTable& select = forced == DoubleQSide::A ? table_a : table_b;
  const QTable& evaluate = forced == DoubleQSide::A ? table_b : table_a;
  const ActionIndex best = greedy_action(select, t.s_next);
  const double td = t.r + cfg.gamma * evaluate(t.s_next, best) - select(t.s, t.a);
  select(t.s, t.a) += cfg.alpha * td;
  return td;
}

double double_q_update(QTable& table_a, QTable& table_b, const Transition& t,
                       const LearnerConfig& cfg, Rng& rng, DoubleQSide* updated) {
  const DoubleQSide side = uniform01(rng) < 0.5 ? DoubleQSide::A : DoubleQSide::B;
  if (updated) *updated = side;
  return double_q_update(table_a, table_b, t, cfg, side);
}

double quantile_update(QuantileTable& table, const Transition& t, const LearnerConfig& cfg) {
  check_transition(t, table.num_states(), table.num_actions());
  const std::size_t n = table.num_quantiles();
  const auto next_means = table.action_values(t.s_next);
  const ActionIndex best = argmax_action(next_means);

  std::vector<double> targets(n);
  const auto next = table.locations(t.s_next, best);
  for (std::size_t j = 0; j < n; ++j) targets[j] = t.r + cfg.gamma * next[j];

  const double td = t.r + cfg.gamma * next_means[best] - table.mean(t.s, t.a);

  auto theta = table.locations(t.s, t.a);
  const std::vector<double> old(theta.begin(), theta.end());
  const double step = cfg.alpha / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double tau = quantile_level(i, n);
    double g = 0.0;
    for (double y : targets) g += tau - (y < old[i] ? 1.0 : 0.0);
    theta[i] = old[i] + step * g;
  }
  return td;
}

}  // namespace coact
