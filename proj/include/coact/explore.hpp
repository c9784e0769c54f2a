#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coact/action_values.hpp"
#include "coact/mdp.hpp"
#include "coact/random.hpp"
#include "coact/transition.hpp"

namespace coact {

enum class StrategyKind { EpsilonGreedy, CoAct, Ucb, Greedy };

std::string_view to_string(StrategyKind kind);
/// Accepts "eps-greedy", "coact", "ucb", "greedy". Throws on anything else.
StrategyKind parse_strategy_kind(std::string_view name);

/// Linear interpolation from `start` to `end` over `horizon` steps, then flat.
struct EpsilonSchedule {
  double start = 1.0;
  double end = 0.1;
  std::uint64_t horizon = 1;

  double at(std::uint64_t step) const;
};

struct StrategyConfig {
  StrategyKind kind = StrategyKind::EpsilonGreedy;
  double epsilon = 0.2;
  double ucb_bonus_coefficient = 2.0;
  /// Probability of a uniform action drawn before the strategy's own rule.
  /// Zero disables it and draws nothing from the generator.
  double uniform_mix = 0.0;
  std::optional<EpsilonSchedule> schedule;

  double epsilon_at(std::uint64_t step) const { return schedule ? schedule->at(step) : epsilon; }
  void validate() const;
};

/// N_t(s, a) and t for the count-based strategy.
class VisitCounts {
 public:
  VisitCounts(std::size_t num_states, std::size_t num_actions)
      : num_actions_(num_actions), counts_(num_states * num_actions, 0) {}

  std::uint64_t count(StateIndex s, ActionIndex a) const { return counts_[s * num_actions_ + a]; }
  std::span<const std::uint64_t> row(StateIndex s) const {
    return {counts_.data() + s * num_actions_, num_actions_};
  }
  std::uint64_t total_steps() const noexcept { return total_; }
  std::size_t num_states() const noexcept { return counts_.size() / num_actions_; }
  std::size_t num_actions() const noexcept { return num_actions_; }

  void record(StateIndex s, ActionIndex a) {
    ++counts_[s * num_actions_ + a];
    ++total_;
  }
  /// Direct assignment for tests and replays; keeps total >= sum of counts.
  void set(StateIndex s, ActionIndex a, std::uint64_t n, std::uint64_t total);

 private:
  std::size_t num_actions_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

/// Uniform action with probability epsilon, else argmax.
ActionIndex select_epsilon_greedy(std::span<const double> row, double epsilon, Rng& rng);

/// Counteractive selection: argmin with probability epsilon, else argmax.
/// One uniform draw per call, the same as select_epsilon_greedy's first draw.
ActionIndex select_coact(std::span<const double> row, double epsilon, Rng& rng);

/// Uniform among unvisited actions if any; otherwise
/// argmax_a Q(s,a) + c * sqrt(log t / N_t(s,a)).
ActionIndex select_ucb(std::span<const double> row, std::span<const std::uint64_t> counts,
                       std::uint64_t total_steps, double bonus_coefficient, Rng& rng);

/// Dispatch on `config.kind`. `step` feeds the epsilon schedule.
ActionIndex select_action(const StrategyConfig& config, std::span<const double> row,
                          StateIndex s, const VisitCounts& counts, std::uint64_t step, Rng& rng);

template <ValueFunction F>
ActionIndex select_epsilon_greedy(const F& q, StateIndex s, double epsilon, Rng& rng) {
  const auto& row = q.action_values(s);
  return select_epsilon_greedy(std::span<const double>(row), epsilon, rng);
}

template <ValueFunction F>
ActionIndex select_coact(const F& q, StateIndex s, double epsilon, Rng& rng) {
  const auto& row = q.action_values(s);
  return select_coact(std::span<const double>(row), epsilon, rng);
}

template <ValueFunction F>
ActionIndex select_ucb(const F& q, StateIndex s, const VisitCounts& counts, Rng& rng,
                       double bonus_coefficient = 2.0) {
  const auto& row = q.action_values(s);
  return select_ucb(std::span<const double>(row), counts.row(s), counts.total_steps(),
                    bonus_coefficient, rng);
}

/// One interaction: choose an action, step the MDP, record the visit.
template <ValueFunction F>
Transition collect_step(const StrategyConfig& strategy, const F& q, const Mdp& mdp, StateIndex s,
                        VisitCounts& counts, Rng& rng) {
  const auto& row = q.action_values(s);
  const ActionIndex a =
      select_action(strategy, std::span<const double>(row), s, counts, counts.total_steps(), rng);
  const auto [next, r] = mdp.step(s, a, rng);
  counts.record(s, a);
  return Transition{s, a, r, next};
}

}  // namespace coact
