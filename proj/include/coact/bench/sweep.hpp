#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "coact/bench/config.hpp"
#include "coact/bench/run_csv.hpp"
#include "coact/train.hpp"

namespace coact::bench {

/// Seed of the initial value function for seed index `seed_index`. Shared by
/// every strategy and epsilon so that comparisons are paired.
std::uint64_t init_seed(std::uint64_t master, std::size_t seed_index);
/// Seed of the interaction stream of one grid cell.
std::uint64_t run_seed(std::uint64_t master, std::size_t strategy_index, std::size_t eps_index,
                       std::size_t seed_index);

/// Runs one (strategy, epsilon, seed) cell.
RunRecord run_cell(const ExperimentConfig& config, const Mdp& mdp, std::size_t strategy_index,
                   std::size_t eps_index, std::size_t seed_index);

/// Every grid cell in (strategy, epsilon, seed, iteration) order. UCB is run
/// once per seed and its rows repeated under every epsilon of the grid.
/// Cells run on up to `threads` workers; 0 reads COACT_THREADS.
std::vector<RunRow> run_sweep(const ExperimentConfig& config, std::size_t threads = 0);

/// run_sweep, then writes <out_dir>/runs.csv atomically. Returns the path.
std::string run_sweep_to_csv(const ExperimentConfig& config, std::size_t threads = 0);

/// Worker count from COACT_THREADS, else hardware concurrency (at least 1).
std::size_t default_thread_count();

}  // namespace coact::bench
