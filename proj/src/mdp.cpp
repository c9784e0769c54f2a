#include "coact/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace coact {

Mdp::Mdp(std::size_t num_states, std::size_t num_actions, std::vector<double> transition,
         std::vector<double> reward, double gamma, StateIndex initial_state)
    : num_states_(num_states),
      num_actions_(num_actions),
      transition_(std::move(transition)),
      reward_(std::move(reward)),
      gamma_(gamma),
      initial_state_(initial_state) {
  if (num_states_ == 0 || num_actions_ == 0)
    throw std::invalid_argument("Mdp: state and action counts must be positive");
  if (transition_.size() != num_states_ * num_actions_ * num_states_)
    throw std::invalid_argument("Mdp: transition tensor has wrong size");
  if (reward_.size() != num_states_ * num_actions_)
    throw std::invalid_argument("Mdp: reward table has wrong size");
  if (!(gamma_ > 0.0 && gamma_ <= 1.0)) throw std::invalid_argument("Mdp: gamma must lie in (0, 1]");
  if (initial_state_ >= num_states_) throw std::invalid_argument("Mdp: initial state out of range");
  for (double r : reward_)
    if (!std::isfinite(r)) throw std::invalid_argument("Mdp: non-finite reward");

  point_mass_.assign(num_states_ * num_actions_, -1);
  for (std::size_t row = 0; row < num_states_ * num_actions_; ++row) {
    const double* p = transition_.data() + row * num_states_;
    double sum = 0.0;
    std::size_t nonzero = 0;
    std::size_t last = 0;
    for (std::size_t j = 0; j < num_states_; ++j) {
      if (!(p[j] >= 0.0) || !std::isfinite(p[j]))
        throw std::invalid_argument("Mdp: negative or non-finite transition probability");
      sum += p[j];
      if (p[j] > 0.0) {
        ++nonzero;
        last = j;
      }
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("Mdp: transition row " + std::to_string(row) + " sums to " +
                                  std::to_string(sum));
    if (nonzero == 1) point_mass_[row] = static_cast<std::int64_t>(last);
  }
}

void Mdp::check_bounds(StateIndex s, ActionIndex a) const {
  if (s >= num_states_ || a >= num_actions_)
    throw std::invalid_argument("Mdp: state or action index out of range");
}

std::span<const double> Mdp::transition_row(StateIndex s, ActionIndex a) const {
  check_bounds(s, a);
  return {transition_.data() + (s * num_actions_ + a) * num_states_, num_states_};
}

double Mdp::reward(StateIndex s, ActionIndex a) const {
  check_bounds(s, a);
  return reward_[s * num_actions_ + a];
}

std::optional<StateIndex> Mdp::deterministic_next(StateIndex s, ActionIndex a) const {
  check_bounds(s, a);
  const auto next = point_mass_[s * num_actions_ + a];
  if (next < 0) return std::nullopt;
  return static_cast<StateIndex>(next);
}

bool Mdp::is_deterministic() const noexcept {
  return std::all_of(point_mass_.begin(), point_mass_.end(), [](auto v) { return v >= 0; });
}

StateIndex Mdp::sample_next(StateIndex s, ActionIndex a, Rng& rng) const {
  if (auto next = deterministic_next(s, a)) return *next;
  const auto row = transition_row(s, a);
  const double u = uniform01(rng);
  double acc = 0.0;
  for (StateIndex j = 0; j < num_states_; ++j) {
    acc += row[j];
    if (u < acc) return j;
  }
  // Rounding left u above the running sum; take the last state with mass.
  for (StateIndex j = num_states_; j-- > 0;)
    if (row[j] > 0.0) return j;
  return num_states_ - 1;
}

ChainStep chain_step(std::size_t state, ChainAction action, std::size_t n) {
  if (n < 4) throw std::invalid_argument("chain: length must be at least 4");
  if (state < 1 || state > n) throw std::invalid_argument("chain: state out of range");
  switch (action) {
    case ChainAction::Up:
      return {state < n ? state + 1 : n, 0.0};
    case ChainAction::Jump2:
      return {2, 0.0};
    case ChainAction::Jump3:
      return {3, 0.0};
    case ChainAction::Reset:
      return {1, state == n ? 1.0 : 0.0};
  }
  throw std::invalid_argument("chain: unknown action");
}

Mdp build_chain_mdp(const ChainSpec& spec, double gamma) {
  const std::size_t n = spec.n;
  if (n < 4) throw std::invalid_argument("chain: length must be at least 4");
  std::vector<double> transition(n * kChainActions * n, 0.0);
  std::vector<double> reward(n * kChainActions, 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t a = 0; a < kChainActions; ++a) {
      const auto [next, r] = chain_step(s + 1, static_cast<ChainAction>(a), n);
      transition[(s * kChainActions + a) * n + (next - 1)] = 1.0;
      reward[s * kChainActions + a] = r;
    }
  }
  return Mdp(n, kChainActions, std::move(transition), std::move(reward), gamma, 0);
}

Mdp random_mdp(std::size_t num_states, std::size_t num_actions, Rng& rng, double gamma) {
  if (num_states < 2 || num_actions < 2)
    throw std::invalid_argument("random_mdp: need at least 2 states and 2 actions");
  std::vector<double> transition(num_states * num_actions * num_states);
  std::vector<double> reward(num_states * num_actions);
  for (std::size_t row = 0; row < num_states * num_actions; ++row) {
    double* p = transition.data() + row * num_states;
    double sum = 0.0;
    for (std::size_t j = 0; j < num_states; ++j) {
      // Bounded away from zero so every row has full support.
      p[j] = std::max(uniform01(rng), 1e-12);
      sum += p[j];
    }
    for (std::size_t j = 0; j < num_states; ++j) p[j] /= sum;
  }
  for (double& r : reward) r = uniform01(rng);
  return Mdp(num_states, num_actions, std::move(transition), std::move(reward), gamma, 0);
}

double optimal_return(const Mdp& mdp, std::size_t horizon) {
  const std::size_t ns = mdp.num_states();
  std::vector<double> value(ns, 0.0);
  std::vector<double> next(ns);
  for (std::size_t k = 0; k < horizon; ++k) {
    for (StateIndex s = 0; s < ns; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      for (ActionIndex a = 0; a < mdp.num_actions(); ++a) {
        const auto row = mdp.transition_row(s, a);
        double q = mdp.reward(s, a);
        for (StateIndex j = 0; j < ns; ++j) q += row[j] * value[j];
        best = std::max(best, q);
      }
      next[s] = best;
    }
    value.swap(next);
  }
  return value[mdp.initial_state()];
}

void check_matching_dimensions(const Mdp& mdp, std::size_t num_states, std::size_t num_actions) {
  if (num_states != mdp.num_states() || num_actions != mdp.num_actions())
    throw std::invalid_argument("value function dimensions do not match the MDP");
}

}  // namespace coact
