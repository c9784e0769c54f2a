#include "coact/explore.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace coact {

std::string_view to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::EpsilonGreedy:
      return "eps-greedy";
    case StrategyKind::CoAct:
      return "coact";
    case StrategyKind::Ucb:
      return "ucb";
    case StrategyKind::Greedy:
      return "greedy";
  }
  return "unknown";
}

StrategyKind parse_strategy_kind(std::string_view name) {
  if (name == "eps-greedy" || name == "epsilon-greedy") return StrategyKind::EpsilonGreedy;
  if (name == "coact") return StrategyKind::CoAct;
  if (name == "ucb") return StrategyKind::Ucb;
  if (name == "greedy") return StrategyKind::Greedy;
  throw std::invalid_argument("unknown strategy '" + std::string(name) + "'");
}

double EpsilonSchedule::at(std::uint64_t step) const {
  if (horizon == 0 || step >= horizon) return end;
  const double frac = static_cast<double>(step) / static_cast<double>(horizon);
  return start + (end - start) * frac;
}

void StrategyConfig::validate() const {
  auto in_unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (!in_unit(epsilon)) throw std::invalid_argument("epsilon must lie in [0, 1]");
  if (!in_unit(uniform_mix)) throw std::invalid_argument("uniform mix must lie in [0, 1]");
  if (schedule && !(in_unit(schedule->start) && in_unit(schedule->end)))
    throw std::invalid_argument("epsilon schedule endpoints must lie in [0, 1]");
  if (!std::isfinite(ucb_bonus_coefficient) || ucb_bonus_coefficient < 0.0)
    throw std::invalid_argument("UCB coefficient must be finite and non-negative");
}

void VisitCounts::set(StateIndex s, ActionIndex a, std::uint64_t n, std::uint64_t total) {
  counts_[s * num_actions_ + a] = n;
  std::uint64_t sum = 0;
  for (auto c : counts_) sum += c;
  if (total < sum) throw std::invalid_argument("VisitCounts: total below sum of counts");
  total_ = total;
}

ActionIndex select_epsilon_greedy(std::span<const double> row, double epsilon, Rng& rng) {
  if (uniform01(rng) < epsilon) return uniform_index(rng, row.size());
  return argmax_action(row);
}

ActionIndex select_coact(std::span<const double> row, double epsilon, Rng& rng) {
  if (uniform01(rng) < epsilon) return argmin_action(row);
  return argmax_action(row);
}

ActionIndex select_ucb(std::span<const double> row, std::span<const std::uint64_t> counts,
                       std::uint64_t total_steps, double bonus_coefficient, Rng& rng) {
  if (counts.size() != row.size()) throw std::invalid_argument("select_ucb: count row mismatch");
  std::vector<ActionIndex> unvisited;
  for (ActionIndex a = 0; a < counts.size(); ++a)
    if (counts[a] == 0) unvisited.push_back(a);
  if (!unvisited.empty()) return unvisited[uniform_index(rng, unvisited.size())];

  const double log_t = std::log(static_cast<double>(std::max<std::uint64_t>(total_steps, 1)));
  ActionIndex best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (ActionIndex a = 0; a < row.size(); ++a) {
    const double score =
        row[a] + bonus_coefficient * std::sqrt(log_t / static_cast<double>(counts[a]));
    if (score > best_score) {
      best_score = score;
      best = a;
    }
  }
  return best;
}

ActionIndex select_action(const StrategyConfig& config, std::span<const double> row,
                          StateIndex s, const VisitCounts& counts, std::uint64_t step, Rng& rng) {
  if (config.uniform_mix > 0.0 && uniform01(rng) < config.uniform_mix)
    return uniform_index(rng, row.size());
  switch (config.kind) {
    case StrategyKind::EpsilonGreedy:
      return select_epsilon_greedy(row, config.epsilon_at(step), rng);
    case StrategyKind::CoAct:
      return select_coact(row, config.epsilon_at(step), rng);
    case StrategyKind::Ucb:
      return select_ucb(row, counts.row(s), counts.total_steps(), config.ucb_bonus_coefficient,
                        rng);
    case StrategyKind::Greedy:
      return argmax_action(row);
  }
  throw std::invalid_argument("select_action: unknown strategy");
}

}  // namespace coact
