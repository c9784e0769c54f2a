#include "coact/bench/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

namespace coact::bench {

std::uint64_t init_seed(std::uint64_t master, std::size_t seed_index) {
  return derive_seed(master, {0, seed_index});
}

std::uint64_t run_seed(std::uint64_t master, std::size_t strategy_index, std::size_t eps_index,
                       std::size_t seed_index) {
  return derive_seed(master, {1, strategy_index, eps_index, seed_index});
}

std::size_t default_thread_count() {
  if (const char* env = std::getenv("COACT_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<std::size_t>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

RunRecord run_cell(const ExperimentConfig& config, const Mdp& mdp, std::size_t strategy_index,
                   std::size_t eps_index, std::size_t seed_index) {
  StrategyConfig strategy;
  strategy.kind = config.strategies.at(strategy_index);
  strategy.epsilon = config.epsilons.at(eps_index);
  strategy.ucb_bonus_coefficient = config.ucb_coefficient;
  strategy.uniform_mix = config.uniform_mix;
  Rng rng(run_seed(config.master_seed, strategy_index, eps_index, seed_index));

  if (config.learner.kind == LearnerSpec::Kind::Network) {
    TrainConfig train;
    train.protocol = config.protocol;
    train.alpha = config.effective_alpha();
    train.gamma = config.gamma;
    train.buffer_capacity = config.buffer_capacity;
    train.batch_size = config.batch_size;
    train.double_q = config.double_q;
    train.target_sync_period = config.target_sync_period;
    train.hidden = config.learner.hidden;
    train.init.seed = init_seed(config.master_seed, seed_index);
    return coact_train(mdp, train, strategy, rng).record;
  }

  TabularTrainConfig train;
  train.protocol = config.protocol;
  train.learner = {config.effective_alpha(), config.gamma, config.init_mu, config.init_sigma};
  train.init_seed = init_seed(config.master_seed, seed_index);
  switch (config.learner.kind) {
    case LearnerSpec::Kind::TabularDouble:
      train.kind = TabularKind::DoubleQ;
      break;
    case LearnerSpec::Kind::Quantile:
      train.kind = TabularKind::Quantile;
      train.num_quantiles = config.learner.quantiles;
      break;
    default:
      train.kind = TabularKind::QLearning;
  }
  return train_tabular(mdp, train, strategy, rng);
}

std::vector<RunRow> run_sweep(const ExperimentConfig& config, std::size_t threads) {
  config.validate();
  const Mdp mdp = config.build_mdp();

  struct Cell {
    std::size_t strategy, eps, seed;
  };
  // One job per distinct computation; UCB cells exist only at epsilon index 0.
  std::vector<Cell> jobs;
  for (std::size_t si = 0; si < config.strategies.size(); ++si)
    for (std::size_t ei = 0; ei < config.epsilons.size(); ++ei) {
      if (config.strategies[si] == StrategyKind::Ucb && ei > 0) continue;
      for (std::size_t k = 0; k < config.seeds; ++k) jobs.push_back({si, ei, k});
    }

  std::vector<RunRecord> results(jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      try {
        results[j] = run_cell(config, mdp, jobs[j].strategy, jobs[j].eps, jobs[j].seed);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t n_workers =
      std::min(jobs.size(), threads == 0 ? default_thread_count() : threads);
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  auto job_index = [&](std::size_t si, std::size_t ei, std::size_t k) {
    std::size_t idx = 0;
    for (const Cell& c : jobs) {
      if (c.strategy == si && c.eps == ei && c.seed == k) return idx;
      ++idx;
    }
    throw std::logic_error("run_sweep: missing job");
  };

  std::vector<RunRow> rows;
  rows.reserve(config.strategies.size() * config.epsilons.size() * config.seeds *
               config.protocol.iterations);
  for (std::size_t si = 0; si < config.strategies.size(); ++si) {
    const std::string name(to_string(config.strategies[si]));
    const bool ucb = config.strategies[si] == StrategyKind::Ucb;
    for (std::size_t ei = 0; ei < config.epsilons.size(); ++ei)
      for (std::size_t k = 0; k < config.seeds; ++k) {
        const RunRecord& rec = results[job_index(si, ucb ? 0 : ei, k)];
        for (const auto& it : rec.iterations)
          rows.push_back({k, name, config.epsilons[ei], it.iteration, it.eval_return, it.mean_td,
                          it.env_steps});
      }
  }
  return rows;
}

std::string run_sweep_to_csv(const ExperimentConfig& config, std::size_t threads) {
  const auto rows = run_sweep(config, threads);
  std::ostringstream out;
  write_run_csv(out, rows);
  const std::string path = config.out_dir + "/runs.csv";
  write_file_atomically(path, out.str());
  return path;
}

}  // namespace coact::bench
