#pragma once

#include <concepts>
#include <cstddef>
#include <span>

#include "coact/transition.hpp"

namespace coact {

/// Anything that yields a row of action values per state: tabular tables,
/// networks over one-hot states, averaged double tables.
template <typename F>
concept ValueFunction = requires(const F& f, StateIndex s) {
  { f.num_states() } -> std::convertible_to<std::size_t>;
  { f.num_actions() } -> std::convertible_to<std::size_t>;
  f.action_values(s);
};

/// Index of the largest entry; ties go to the lowest index.
inline ActionIndex argmax_action(std::span<const double> row) {
  ActionIndex best = 0;
  for (ActionIndex a = 1; a < row.size(); ++a)
    if (row[a] > row[best]) best = a;
  return best;
}

/// Index of the smallest entry; ties go to the lowest index.
inline ActionIndex argmin_action(std::span<const double> row) {
  ActionIndex best = 0;
  for (ActionIndex a = 1; a < row.size(); ++a)
    if (row[a] < row[best]) best = a;
  return best;
}

inline double max_value(std::span<const double> row) { return row[argmax_action(row)]; }
inline double min_value(std::span<const double> row) { return row[argmin_action(row)]; }

}  // namespace coact
