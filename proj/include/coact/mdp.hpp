#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "coact/action_values.hpp"
#include "coact/random.hpp"
#include "coact/transition.hpp"

namespace coact {

/// Finite MDP with a point-mass initial distribution. Immutable once built.
///
/// Transition rows are stored densely: row (s, a) holds T(s, a, .) over all
/// next states. Rows that are point masses are detected at construction so
/// that stepping a deterministic MDP does not consume generator state.
class Mdp {
 public:
  /// `transition` has num_states * num_actions * num_states entries, row-major
  /// in (s, a, s'); `reward` has num_states * num_actions entries.
  /// Throws std::invalid_argument if any invariant is violated.
  Mdp(std::size_t num_states, std::size_t num_actions, std::vector<double> transition,
      std::vector<double> reward, double gamma, StateIndex initial_state);

  std::size_t num_states() const noexcept { return num_states_; }
  std::size_t num_actions() const noexcept { return num_actions_; }
  double gamma() const noexcept { return gamma_; }
  StateIndex initial_state() const noexcept { return initial_state_; }

  std::span<const double> transition_row(StateIndex s, ActionIndex a) const;
  double transition(StateIndex s, ActionIndex a, StateIndex s_next) const {
    return transition_row(s, a)[s_next];
  }
  double reward(StateIndex s, ActionIndex a) const;

  /// Next state if row (s, a) is a point mass.
  std::optional<StateIndex> deterministic_next(StateIndex s, ActionIndex a) const;
  bool is_deterministic() const noexcept;

  /// Samples s' ~ T(s, a, .). Draws from `rng` only for non-degenerate rows.
  StateIndex sample_next(StateIndex s, ActionIndex a, Rng& rng) const;

  /// One environment step: (s', r(s, a)).
  std::pair<StateIndex, double> step(StateIndex s, ActionIndex a, Rng& rng) const {
    return {sample_next(s, a, rng), reward(s, a)};
  }

 private:
  void check_bounds(StateIndex s, ActionIndex a) const;

  std::size_t num_states_;
  std::size_t num_actions_;
  std::vector<double> transition_;
  std::vector<double> reward_;
  std::vector<std::int64_t> point_mass_;  // -1 for stochastic rows
  double gamma_;
  StateIndex initial_state_;
};

/// Actions of the chain benchmark, in action-index order.
enum class ChainAction : ActionIndex { Up = 0, Jump2 = 1, Jump3 = 2, Reset = 3 };

inline constexpr std::size_t kChainActions = 4;

/// Chain of `n` states numbered 1..n. Mdp state index i corresponds to chain
/// state i + 1.
struct ChainSpec {
  std::size_t n = 10;
};

struct ChainStep {
  std::size_t next_state;  // 1-based
  double reward;
  friend bool operator==(const ChainStep&, const ChainStep&) = default;
};

/// Deterministic chain dynamics on 1-based states. UP climbs (self-loop at n),
/// JUMP2/JUMP3 go to states 2/3, RESET returns to 1. Only RESET from n pays 1.
ChainStep chain_step(std::size_t state, ChainAction action, std::size_t n);

Mdp build_chain_mdp(const ChainSpec& spec, double gamma);

/// Rows are i.i.d. Uniform(0,1) draws normalized to sum to one; rewards are
/// i.i.d. Uniform(0,1). Initial state 0.
Mdp random_mdp(std::size_t num_states, std::size_t num_actions, Rng& rng, double gamma = 0.99);

/// Maximal expected undiscounted return over `horizon` steps from the initial
/// state, by backward induction over (state, steps remaining).
double optimal_return(const Mdp& mdp, std::size_t horizon);

/// Undiscounted return of the argmax policy run for `horizon` steps from the
/// initial state. Stochastic rows are sampled from `rng`.
template <ValueFunction F>
double evaluate_greedy(const Mdp& mdp, const F& values, std::size_t horizon, Rng& rng);

template <ValueFunction F>
double evaluate_greedy(const Mdp& mdp, const F& values, std::size_t horizon) {
  Rng rng(0);
  return evaluate_greedy(mdp, values, horizon, rng);
}

void check_matching_dimensions(const Mdp& mdp, std::size_t num_states, std::size_t num_actions);

template <ValueFunction F>
double evaluate_greedy(const Mdp& mdp, const F& values, std::size_t horizon, Rng& rng) {
  check_matching_dimensions(mdp, values.num_states(), values.num_actions());
  double total = 0.0;
  StateIndex s = mdp.initial_state();
  for (std::size_t t = 0; t < horizon; ++t) {
    const auto& row = values.action_values(s);
    const ActionIndex a = argmax_action(std::span<const double>(row));
    auto [next, r] = mdp.step(s, a, rng);
    total += r;
    s = next;
  }
  return total;
}

}  // namespace coact
