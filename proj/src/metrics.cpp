#include "coact/metrics.hpp"

#include <cmath>
#include <numeric>

namespace coact {

Estimate mean_with_se(std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("mean_with_se: no samples");
  const double n = static_cast<double>(samples.size());
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  if (samples.size() == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

double normalized_td_gain(double td_method, double td_baseline) {
  if (td_baseline == 0.0) throw std::domain_error("normalized TD gain undefined for zero baseline");
  return 1.0 + (td_method - td_baseline) / std::abs(td_baseline);
}

double human_normalized(double score_agent, double score_random, double score_human) {
  if (score_human == score_random)
    throw std::domain_error("human-normalized score undefined when human equals random");
  return (score_agent - score_random) / (score_human - score_random);
}

namespace {

void require_members(std::span<const QTable> ensemble) {
  if (ensemble.empty()) throw std::invalid_argument("ensemble is empty");
}

double row_mean(std::span<const double> row) {
  return std::accumulate(row.begin(), row.end(), 0.0) / static_cast<double>(row.size());
}

/// Largest |mean| over probes, each probe's samples produced by `fill`.
template <typename Fill>
Estimate sup_over_probes(std::span<const StateIndex> probes, std::size_t members, Fill&& fill) {
  if (probes.empty()) throw std::invalid_argument("no probe states");
  Estimate best{-1.0, 0.0};
  std::vector<double> samples(members);
  for (StateIndex s : probes) {
    fill(s, samples);
    const Estimate e = mean_with_se(samples);
    if (std::abs(e.value) > best.value) best = {std::abs(e.value), e.standard_error};
  }
  return best;
}

double expected_next(const Mdp& mdp, StateIndex s, ActionIndex a,
                     const std::vector<double>& next_value) {
  const auto row = mdp.transition_row(s, a);
  if (auto next = mdp.deterministic_next(s, a)) return next_value[*next];
  double v = 0.0;
  for (StateIndex j = 0; j < row.size(); ++j) v += row[j] * next_value[j];
  return v;
}

}  // namespace

std::vector<StateIndex> all_states(const Mdp& mdp) {
  std::vector<StateIndex> states(mdp.num_states());
  std::iota(states.begin(), states.end(), StateIndex{0});
  return states;
}

Estimate disadvantage_gap(std::span<const QTable> ensemble, StateIndex s) {
  require_members(ensemble);
  std::vector<double> gaps;
  gaps.reserve(ensemble.size());
  for (const QTable& q : ensemble) {
    const auto row = q.action_values(s);
    gaps.push_back(row_mean(row) - min_value(row));
  }
  return mean_with_se(gaps);
}

Estimate estimate_eta(std::span<const QTable> ensemble, const Mdp& mdp,
                      std::span<const StateIndex> probes) {
  require_members(ensemble);
  return sup_over_probes(probes, ensemble.size(), [&](StateIndex s, std::vector<double>& out) {
    double uniform = 0.0;
    for (ActionIndex a = 0; a < mdp.num_actions(); ++a) uniform += mdp.reward(s, a);
    uniform /= static_cast<double>(mdp.num_actions());
    for (std::size_t k = 0; k < ensemble.size(); ++k)
      out[k] = mdp.reward(s, min_action(ensemble[k], s)) - uniform;
  });
}

Estimate estimate_eta(std::span<const QTable> ensemble, const Mdp& mdp) {
  const auto probes = all_states(mdp);
  return estimate_eta(ensemble, mdp, probes);
}

Estimate estimate_delta(std::span<const QTable> ensemble, const Mdp& mdp, ProbeActionRule rule,
                        std::span<const StateIndex> probes, Rng& rng) {
  require_members(ensemble);
  std::vector<std::vector<double>> max_q(ensemble.size());
  for (std::size_t k = 0; k < ensemble.size(); ++k) {
    max_q[k].resize(mdp.num_states());
    for (StateIndex s = 0; s < mdp.num_states(); ++s)
      max_q[k][s] = max_value(ensemble[k].action_values(s));
  }
  return sup_over_probes(probes, ensemble.size(), [&](StateIndex s, std::vector<double>& out) {
    for (std::size_t k = 0; k < ensemble.size(); ++k) {
      const ActionIndex a_hat = rule == ProbeActionRule::Min
                                    ? min_action(ensemble[k], s)
                                    : uniform_index(rng, mdp.num_actions());
      out[k] = max_q[k][s] - expected_next(mdp, s, a_hat, max_q[k]);
    }
  });
}

Estimate estimate_delta(std::span<const QTable> ensemble, const Mdp& mdp, ProbeActionRule rule,
                        Rng& rng) {
  const auto probes = all_states(mdp);
  return estimate_delta(ensemble, mdp, rule, probes, rng);
}

Estimate estimate_delta(std::span<const QTable> ensemble, std::span<const QTable> eval_ensemble,
                        const Mdp& mdp, ProbeActionRule rule, std::span<const StateIndex> probes,
                        Rng& rng) {
  require_members(ensemble);
  if (eval_ensemble.size() != ensemble.size())
    throw std::invalid_argument("estimate_delta: ensembles must have equal size");
  // Q_hat(s, argmax_a Q(s, a)) per member and state.
  std::vector<std::vector<double>> cross(ensemble.size());
  for (std::size_t k = 0; k < ensemble.size(); ++k) {
    cross[k].resize(mdp.num_states());
    for (StateIndex s = 0; s < mdp.num_states(); ++s)
      cross[k][s] = eval_ensemble[k](s, greedy_action(ensemble[k], s));
  }
  return sup_over_probes(probes, ensemble.size(), [&](StateIndex s, std::vector<double>& out) {
    for (std::size_t k = 0; k < ensemble.size(); ++k) {
      const ActionIndex a_hat = rule == ProbeActionRule::Min
                                    ? min_action(ensemble[k], s)
                                    : uniform_index(rng, mdp.num_actions());
      out[k] = cross[k][s] - expected_next(mdp, s, a_hat, cross[k]);
    }
  });
}

}  // namespace coact
