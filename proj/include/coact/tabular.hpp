#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "coact/action_values.hpp"
#include "coact/random.hpp"
#include "coact/transition.hpp"

namespace coact {

/// Dense (state, action) value table, row-major.
class QTable {
 public:
  QTable() = default;
  QTable(std::size_t num_states, std::size_t num_actions, double fill = 0.0);

  std::size_t num_states() const noexcept { return num_states_; }
  std::size_t num_actions() const noexcept { return num_actions_; }

  double& operator()(StateIndex s, ActionIndex a) { return values_[s * num_actions_ + a]; }
  double operator()(StateIndex s, ActionIndex a) const { return values_[s * num_actions_ + a]; }

  std::span<const double> action_values(StateIndex s) const {
    return {values_.data() + s * num_actions_, num_actions_};
  }
  std::span<double> action_values(StateIndex s) {
    return {values_.data() + s * num_actions_, num_actions_};
  }

  std::span<const double> data() const noexcept { return values_; }
  std::span<double> data() noexcept { return values_; }

  friend bool operator==(const QTable&, const QTable&) = default;

 private:
  std::size_t num_states_ = 0;
  std::size_t num_actions_ = 0;
  std::vector<double> values_;
};

/// N quantile locations per (state, action). Value estimate is their mean.
class QuantileTable {
 public:
  QuantileTable(std::size_t num_states, std::size_t num_actions, std::size_t num_quantiles,
                double fill = 0.0);

  std::size_t num_states() const noexcept { return num_states_; }
  std::size_t num_actions() const noexcept { return num_actions_; }
  std::size_t num_quantiles() const noexcept { return num_quantiles_; }

  std::span<double> locations(StateIndex s, ActionIndex a) {
    return {locations_.data() + (s * num_actions_ + a) * num_quantiles_, num_quantiles_};
  }
  std::span<const double> locations(StateIndex s, ActionIndex a) const {
    return {locations_.data() + (s * num_actions_ + a) * num_quantiles_, num_quantiles_};
  }

  double mean(StateIndex s, ActionIndex a) const;
  std::vector<double> action_values(StateIndex s) const;

  friend bool operator==(const QuantileTable&, const QuantileTable&) = default;

 private:
  std::size_t num_states_;
  std::size_t num_actions_;
  std::size_t num_quantiles_;
  std::vector<double> locations_;
};

/// Acting view over a pair of double-Q tables: the average of both.
class DoubleQView {
 public:
  DoubleQView(const QTable& a, const QTable& b) : a_(a), b_(b) {}
  std::size_t num_states() const noexcept { return a_.num_states(); }
  std::size_t num_actions() const noexcept { return a_.num_actions(); }
  std::vector<double> action_values(StateIndex s) const;

 private:
  const QTable& a_;
  const QTable& b_;
};

struct LearnerConfig {
  double alpha = 0.1;
  double gamma = 0.99;
  double init_mu = 0.0;
  double init_sigma = 0.1;

  void validate() const;
};

/// Entries i.i.d. Normal(mu, sigma^2). sigma == 0 yields exactly `mu` without
/// drawing.
QTable init_qtable(std::size_t num_states, std::size_t num_actions, double mu, double sigma,
                   Rng& rng);

ActionIndex greedy_action(const QTable& table, StateIndex s);
ActionIndex min_action(const QTable& table, StateIndex s);

/// Q-learning step on a single entry. Returns the TD value
/// r + gamma * max Q(s', .) - Q(s, a) computed before the update.
double q_update(QTable& table, const Transition& t, const LearnerConfig& cfg);

/// Which table a double-Q step updated.
enum class DoubleQSide { A, B };

/// Classic tabular double Q-learning: a fair coin picks the table to update;
/// that table selects argmax at s', the other evaluates it. Returns the TD
/// value of the updated side. `forced` skips the coin (used for testing a
/// single branch).
double double_q_update(QTable& table_a, QTable& table_b, const Transition& t,
                       const LearnerConfig& cfg, Rng& rng, DoubleQSide* updated = nullptr);
double double_q_update(QTable& table_a, QTable& table_b, const Transition& t,
                       const LearnerConfig& cfg, DoubleQSide forced);

/// Midpoint quantile level (2i + 1) / (2N) for zero-based i.
inline double quantile_level(std::size_t i, std::size_t n) {
  return (2.0 * static_cast<double>(i) + 1.0) / (2.0 * static_cast<double>(n));
}

/// Quantile-regression TD step. With a* = argmax of the means at s' and
/// targets y_j = r + gamma * theta_j(s', a*), every location moves by
/// (alpha / N) * sum_j (tau_i - [y_j < theta_i]). Returns the TD of the means.
double quantile_update(QuantileTable& table, const Transition& t, const LearnerConfig& cfg);

}  // namespace coact
