#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "coact/bench/config.hpp"
#include "coact/theory.hpp"

namespace coact::bench {

struct VerifySuiteConfig {
  std::size_t samples = 10000;
  std::size_t prop1_samples = 10000;
  std::uint64_t master_seed = 0;
  StateIndex state = 0;
  double gamma = 0.99;
  std::size_t chain_length = 10;
  std::size_t random_states = 20;
  std::size_t random_actions = 4;
  EnsembleSpec ensemble;
  /// When set, Prop. 1 is also run on this head-shifted spec as a
  /// counterexample; it is expected to (and should) fail.
  std::optional<std::vector<double>> prop1_bias;
  std::string out_dir = "out";

  static VerifySuiteConfig from_settings(const Settings& settings);
};

struct VerifySuiteResult {
  std::vector<std::string> csv_rows;
  bool all_pass = true;
};

/// Theorems 1 and 2 on the chain and a seeded random MDP, then Prop. 1.
/// Human-readable output goes to `log`.
VerifySuiteResult run_verify_suite(const VerifySuiteConfig& config, std::ostream& log);

}  // namespace coact::bench
