#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "coact/action_values.hpp"
#include "coact/mdp.hpp"
#include "coact/random.hpp"
#include "coact/tabular.hpp"
#include "coact/transition.hpp"

namespace coact {

/// Monte-Carlo mean with its standard error.
struct Estimate {
  double value = 0.0;
  double standard_error = 0.0;
  friend bool operator==(const Estimate&, const Estimate&) = default;
};

/// Sample mean and standard error of the mean (n - 1 denominator; zero for n = 1).
Estimate mean_with_se(std::span<const double> samples);

/// TD of a single transition. With `evaluator`, the double-Q form
/// r + gamma * Q_eval(s', argmax_a Q(s', a)) - Q(s, a).
template <ValueFunction F>
double td_value(const F& q, const Transition& t, double gamma, const F* evaluator = nullptr) {
  const auto& next = q.action_values(t.s_next);
  const std::span<const double> next_row(next);
  double bootstrap;
  if (evaluator) {
    const auto& eval_next = evaluator->action_values(t.s_next);
    bootstrap = std::span<const double>(eval_next)[argmax_action(next_row)];
  } else {
    bootstrap = max_value(next_row);
  }
  const auto& here = q.action_values(t.s);
  return t.r + gamma * bootstrap - std::span<const double>(here)[t.a];
}

/// Mean of r + gamma * max_a Q(s', a) - Q(s, a) over the batch.
template <ValueFunction F>
double batch_mean_td(const F& q, std::span<const Transition> batch, double gamma,
                     const F* evaluator = nullptr) {
  if (batch.empty()) throw std::invalid_argument("batch_mean_td: empty batch");
  double sum = 0.0;
  for (const Transition& t : batch) sum += td_value(q, t, gamma, evaluator);
  return sum / static_cast<double>(batch.size());
}

/// 1 + (method - baseline) / |baseline|. Throws std::domain_error for a zero baseline.
double normalized_td_gain(double td_method, double td_baseline);

/// (agent - random) / (human - random). Throws std::domain_error if human == random.
double human_normalized(double score_agent, double score_random, double score_human);

/// E over members and uniform actions of Q(s, a) - min_a Q(s, a).
Estimate disadvantage_gap(std::span<const QTable> ensemble, StateIndex s);

/// Sup over `probes` of |E_theta r(s, argmin Q_theta(s)) - mean_a r(s, a)|.
/// The reported standard error is that of the maximizing probe.
Estimate estimate_eta(std::span<const QTable> ensemble, const Mdp& mdp,
                      std::span<const StateIndex> probes);
Estimate estimate_eta(std::span<const QTable> ensemble, const Mdp& mdp);

/// How the probe action of the smoothness estimate is chosen per member.
enum class ProbeActionRule { Min, Uniform };

/// Sup over `probes` of |E max_a Q(s, a) - E_{s' ~ T(s, a_hat, .)} max_a Q(s', a)|.
/// The expectation over s' is taken exactly from the kernel. `rng` is used
/// only for the uniform rule.
Estimate estimate_delta(std::span<const QTable> ensemble, const Mdp& mdp, ProbeActionRule rule,
                        std::span<const StateIndex> probes, Rng& rng);
Estimate estimate_delta(std::span<const QTable> ensemble, const Mdp& mdp, ProbeActionRule rule,
                        Rng& rng);

/// Double-Q smoothness: compares Q_hat(s, argmax Q(s, .)) with its expectation
/// at s'. Members are paired by index.
Estimate estimate_delta(std::span<const QTable> ensemble, std::span<const QTable> eval_ensemble,
                        const Mdp& mdp, ProbeActionRule rule, std::span<const StateIndex> probes,
                        Rng& rng);

std::vector<StateIndex> all_states(const Mdp& mdp);

}  // namespace coact
