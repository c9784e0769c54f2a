#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "coact/explore.hpp"
#include "coact/mdp.hpp"
#include "coact/train.hpp"

namespace coact::bench {

/// Invalid configuration. what() lists every offending field, one per line.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::vector<std::string>& problems);
  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

struct EnvSpec {
  enum class Kind { Chain, Random } kind = Kind::Chain;
  std::size_t chain_length = 10;
  std::size_t states = 20;
  std::size_t actions = 4;

  /// "chain", "chain:10", "chain{10}", "random:20x4", "random{20,4}".
  static EnvSpec parse(const std::string& text);
  std::string name() const;
};

struct LearnerSpec {
  enum class Kind { Tabular, TabularDouble, Quantile, Network } kind = Kind::Tabular;
  std::size_t quantiles = 8;
  std::size_t hidden = 32;

  /// "tabular", "tabular-double", "quantile:8", "quantile{8}", "network:32".
  static LearnerSpec parse(const std::string& text);
  std::string name() const;
};

/// Flat key = value settings. Later assignments win, so CLI overrides are
/// applied by merging them after the file.
using Settings = std::map<std::string, std::string>;

/// Parses UTF-8 `key = value` lines; '#' starts a comment. Throws ConfigError
/// naming the line of any malformed entry.
Settings parse_settings(const std::string& text);
Settings load_settings_file(const std::string& path);

struct ExperimentConfig {
  EnvSpec env;
  LearnerSpec learner;
  std::vector<StrategyKind> strategies{StrategyKind::CoAct, StrategyKind::EpsilonGreedy,
                                       StrategyKind::Ucb};
  std::vector<double> epsilons{0.15, 0.175, 0.2, 0.225, 0.25};
  /// Tabular default 1.0, network default 0.1 when unset.
  std::optional<double> alpha;
  double gamma = 0.9;
  double init_mu = 0.0;
  double init_sigma = 0.1;
  Protocol protocol;
  std::size_t seeds = 20;
  std::uint64_t master_seed = 0;
  double ucb_coefficient = 2.0;
  double uniform_mix = 0.0;
  // Network learner.
  std::size_t batch_size = 32;
  std::size_t buffer_capacity = 10000;
  std::size_t target_sync_period = 100;
  bool double_q = false;
  std::string out_dir = "out";

  double effective_alpha() const;
  /// Throws ConfigError listing every invalid field.
  void validate() const;

  Mdp build_mdp() const;

  /// Unknown keys are rejected.
  static ExperimentConfig from_settings(const Settings& settings);
};

/// Inclusive "start:stop:step" range or a comma list.
std::vector<double> parse_real_list(const std::string& text);

}  // namespace coact::bench
