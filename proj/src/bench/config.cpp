#include "coact/bench/config.hpp"

#include "coact/bench/verify_suite.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace coact::bench {

namespace {

std::string join_lines(const std::vector<std::string>& items) {
  std::string out = "invalid configuration:";
  for (const auto& s : items) out += "\n  " + s;
  return out;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

/// Leading identifier and the integers that follow it in any bracket style.
std::pair<std::string, std::vector<std::size_t>> split_kind(const std::string& text) {
  std::size_t i = 0;
  while (i < text.size() && (std::isalpha(static_cast<unsigned char>(text[i])) || text[i] == '-'))
    ++i;
  std::string name = text.substr(0, i);
  std::vector<std::size_t> numbers;
  std::string rest = text.substr(i);
  std::size_t value = 0;
  bool in_number = false;
  for (char c : rest) {
    if (std::isdigit(static_cast<unsigned char>(c))) {
      value = value * 10 + static_cast<std::size_t>(c - '0');
      in_number = true;
    } else {
      if (in_number) numbers.push_back(value);
      value = 0;
      in_number = false;
      if (std::string_view(":{}(),x ").find(c) == std::string_view::npos)
        throw ConfigError({"unexpected character in '" + text + "'"});
    }
  }
  if (in_number) numbers.push_back(value);
  return {name, numbers};
}

double parse_real(const std::string& key, const std::string& text,
                  std::vector<std::string>& problems) {
  double v = 0.0;
  const auto t = trim(text);
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    problems.push_back(key + ": expected a number, got '" + text + "'");
    return 0.0;
  }
  return v;
}

std::uint64_t parse_uint(const std::string& key, const std::string& text,
                         std::vector<std::string>& problems) {
  std::uint64_t v = 0;
  const auto t = trim(text);
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    problems.push_back(key + ": expected a non-negative integer, got '" + text + "'");
    return 0;
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& text,
                std::vector<std::string>& problems) {
  const auto t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  problems.push_back(key + ": expected true/false, got '" + text + "'");
  return false;
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

ConfigError::ConfigError(const std::vector<std::string>& problems)
    : std::runtime_error(join_lines(problems)), problems_(problems) {}

EnvSpec EnvSpec::parse(const std::string& text) {
  const auto [name, numbers] = split_kind(trim(text));
  EnvSpec spec;
  if (name == "chain") {
    spec.kind = Kind::Chain;
    if (numbers.size() > 1) throw ConfigError({"env: chain takes one length"});
    if (!numbers.empty()) spec.chain_length = numbers[0];
    spec.actions = kChainActions;
  } else if (name == "random") {
    spec.kind = Kind::Random;
    if (numbers.size() == 1 || numbers.size() > 2)
      throw ConfigError({"env: random takes states and actions"});
    if (numbers.size() == 2) {
      spec.states = numbers[0];
      spec.actions = numbers[1];
    }
  } else {
    throw ConfigError({"env: unknown environment '" + text + "'"});
  }
  return spec;
}

std::string EnvSpec::name() const {
  if (kind == Kind::Chain) return "chain" + std::to_string(chain_length);
  return "random" + std::to_string(states) + "x" + std::to_string(actions);
}

LearnerSpec LearnerSpec::parse(const std::string& text) {
  const auto [name, numbers] = split_kind(trim(text));
  LearnerSpec spec;
  if (numbers.size() > 1) throw ConfigError({"learner: at most one size parameter"});
  if (name == "tabular" && numbers.empty()) {
    spec.kind = Kind::Tabular;
  } else if (name == "tabular-double" && numbers.empty()) {
    spec.kind = Kind::TabularDouble;
  } else if (name == "quantile") {
    spec.kind = Kind::Quantile;
    if (!numbers.empty()) spec.quantiles = numbers[0];
  } else if (name == "network") {
    spec.kind = Kind::Network;
    if (!numbers.empty()) spec.hidden = numbers[0];
  } else {
    throw ConfigError({"learner: unknown learner '" + text + "'"});
  }
  return spec;
}

std::string LearnerSpec::name() const {
  switch (kind) {
    case Kind::Tabular:
      return "tabular";
    case Kind::TabularDouble:
      return "tabular-double";
    case Kind::Quantile:
      return "quantile" + std::to_string(quantiles);
    case Kind::Network:
      return "network" + std::to_string(hidden);
  }
  return "unknown";
}

Settings parse_settings(const std::string& text) {
  Settings settings;
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  std::vector<std::string> problems;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      problems.push_back("line " + std::to_string(number) + ": expected 'key = value'");
      continue;
    }
    const auto key = trim(body.substr(0, eq));
    if (key.empty()) {
      problems.push_back("line " + std::to_string(number) + ": empty key");
      continue;
    }
    settings[key] = trim(body.substr(eq + 1));
  }
  if (!problems.empty()) throw ConfigError(problems);
  return settings;
}

Settings load_settings_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({"cannot open config file '" + path + "'"});
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_settings(ss.str());
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<std::string> problems;
  std::vector<double> out;
  const auto t = trim(text);
  if (t.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 3) throw ConfigError({"range must be start:stop:step, got '" + text + "'"});
    const double start = parse_real("range", parts[0], problems);
    const double stop = parse_real("range", parts[1], problems);
    const double step = parse_real("range", parts[2], problems);
    if (!problems.empty()) throw ConfigError(problems);
    if (!(step > 0.0) || stop < start) throw ConfigError({"range: need step > 0 and stop >= start"});
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i)
      out.push_back(std::round((start + static_cast<double>(i) * step) * 1e12) / 1e12);
    return out;
  }
  for (const auto& item : split_commas(t)) out.push_back(parse_real("list", item, problems));
  if (!problems.empty()) throw ConfigError(problems);
  return out;
}

double ExperimentConfig::effective_alpha() const {
  if (alpha) return *alpha;
  return learner.kind == LearnerSpec::Kind::Network ? 0.1 : 1.0;
}

void ExperimentConfig::validate() const {
  std::vector<std::string> problems;
  if (env.kind == EnvSpec::Kind::Chain && env.chain_length < 4)
    problems.push_back("env: chain length must be at least 4");
  if (env.kind == EnvSpec::Kind::Random && (env.states < 2 || env.actions < 2))
    problems.push_back("env: random MDP needs at least 2 states and 2 actions");
  if (learner.kind == LearnerSpec::Kind::Quantile && learner.quantiles == 0)
    problems.push_back("learner: quantile count must be positive");
  if (learner.kind == LearnerSpec::Kind::Network && learner.hidden == 0)
    problems.push_back("learner: hidden width must be positive");
  if (strategies.empty()) problems.push_back("strategy: grid is empty");
  if (epsilons.empty()) problems.push_back("epsilon: grid is empty");
  for (double e : epsilons)
    if (!(e >= 0.0 && e <= 1.0)) problems.push_back("epsilon: " + std::to_string(e) + " outside [0, 1]");
  const double a = effective_alpha();
  if (learner.kind == LearnerSpec::Kind::Network ? !(a > 0.0) : !(a > 0.0 && a <= 1.0))
    problems.push_back("alpha: out of range");
  if (!(gamma > 0.0 && gamma <= 1.0)) problems.push_back("gamma: must lie in (0, 1]");
  if (!(init_sigma >= 0.0)) problems.push_back("init_sigma: must be non-negative");
  if (!std::isfinite(init_mu)) problems.push_back("init_mu: must be finite");
  if (protocol.iterations == 0) problems.push_back("iterations: must be at least 1");
  if (protocol.train_steps == 0) problems.push_back("train_steps: must be at least 1");
  if (seeds == 0) problems.push_back("seeds: must be at least 1");
  if (!(ucb_coefficient >= 0.0)) problems.push_back("ucb_coefficient: must be non-negative");
  if (!(uniform_mix >= 0.0 && uniform_mix <= 1.0)) problems.push_back("uniform_mix: outside [0, 1]");
  if (batch_size == 0) problems.push_back("batch_size: must be positive");
  if (buffer_capacity < batch_size) problems.push_back("buffer_capacity: smaller than batch_size");
  if (target_sync_period == 0) problems.push_back("target_sync: must be positive");
  if (out_dir.empty()) problems.push_back("out: empty output directory");
  if (!problems.empty()) throw ConfigError(problems);
}

Mdp ExperimentConfig::build_mdp() const {
  if (env.kind == EnvSpec::Kind::Chain) return build_chain_mdp({env.chain_length}, gamma);
  Rng rng(derive_seed(master_seed, {2}));
  return random_mdp(env.states, env.actions, rng, gamma);
}

ExperimentConfig ExperimentConfig::from_settings(const Settings& settings) {
  ExperimentConfig c;
  std::vector<std::string> problems;
  for (const auto& [key, value] : settings) {
    try {
      if (key == "env") {
        c.env = EnvSpec::parse(value);
      } else if (key == "learner") {
        c.learner = LearnerSpec::parse(value);
      } else if (key == "strategy" || key == "strategies") {
        c.strategies.clear();
        for (const auto& name : split_commas(value)) c.strategies.push_back(parse_strategy_kind(name));
      } else if (key == "epsilon" || key == "epsilons") {
        c.epsilons = parse_real_list(value);
      } else if (key == "alpha") {
        c.alpha = parse_real(key, value, problems);
      } else if (key == "gamma") {
        c.gamma = parse_real(key, value, problems);
      } else if (key == "init_mu") {
        c.init_mu = parse_real(key, value, problems);
      } else if (key == "init_sigma") {
        c.init_sigma = parse_real(key, value, problems);
      } else if (key == "iterations") {
        c.protocol.iterations = parse_uint(key, value, problems);
      } else if (key == "train_steps") {
        c.protocol.train_steps = parse_uint(key, value, problems);
      } else if (key == "eval_steps") {
        c.protocol.eval_steps = parse_uint(key, value, problems);
      } else if (key == "reset_each_iteration") {
        c.protocol.reset_each_iteration = parse_bool(key, value, problems);
      } else if (key == "seeds") {
        c.seeds = parse_uint(key, value, problems);
      } else if (key == "master_seed") {
        c.master_seed = parse_uint(key, value, problems);
      } else if (key == "ucb_coefficient") {
        c.ucb_coefficient = parse_real(key, value, problems);
      } else if (key == "uniform_mix") {
        c.uniform_mix = parse_real(key, value, problems);
      } else if (key == "batch_size") {
        c.batch_size = parse_uint(key, value, problems);
      } else if (key == "buffer_capacity") {
        c.buffer_capacity = parse_uint(key, value, problems);
      } else if (key == "target_sync") {
        c.target_sync_period = parse_uint(key, value, problems);
      } else if (key == "double_q") {
        c.double_q = parse_bool(key, value, problems);
      } else if (key == "out") {
        c.out_dir = value;
      } else {
        problems.push_back(key + ": unknown setting");
      }
    } catch (const ConfigError& e) {
      problems.insert(problems.end(), e.problems().begin(), e.problems().end());
    } catch (const std::invalid_argument& e) {
      problems.push_back(key + ": " + e.what());
    }
  }
  try {
    c.validate();
  } catch (const ConfigError& e) {
    problems.insert(problems.end(), e.problems().begin(), e.problems().end());
  }
  if (!problems.empty()) throw ConfigError(problems);
  return c;
}

// Lives here to share the field parsers.
VerifySuiteConfig VerifySuiteConfig::from_settings(const Settings& settings) {
  VerifySuiteConfig c;
  std::vector<std::string> problems;
  for (const auto& [key, value] : settings) {
    if (key == "samples") {
      c.samples = parse_uint(key, value, problems);
    } else if (key == "prop1_samples") {
      c.prop1_samples = parse_uint(key, value, problems);
    } else if (key == "master_seed") {
      c.master_seed = parse_uint(key, value, problems);
    } else if (key == "state") {
      c.state = parse_uint(key, value, problems);
    } else if (key == "gamma") {
      c.gamma = parse_real(key, value, problems);
    } else if (key == "chain_length") {
      c.chain_length = parse_uint(key, value, problems);
    } else if (key == "random_states") {
      c.random_states = parse_uint(key, value, problems);
    } else if (key == "random_actions") {
      c.random_actions = parse_uint(key, value, problems);
    } else if (key == "model") {
      const auto t = trim(value);
      if (t == "tabular") {
        c.ensemble.model = ModelKind::Tabular;
      } else if (t == "network") {
        c.ensemble.model = ModelKind::Network;
      } else {
        problems.push_back(key + ": expected tabular or network, got '" + value + "'");
      }
    } else if (key == "init_family") {
      const auto t = trim(value);
      if (t == "normal") {
        c.ensemble.init.family = InitFamily::Normal;
      } else if (t == "uniform") {
        c.ensemble.init.family = InitFamily::Uniform;
      } else {
        problems.push_back(key + ": expected normal or uniform, got '" + value + "'");
      }
    } else if (key == "init_scale") {
      c.ensemble.init.output_scale = parse_real(key, value, problems);
    } else if (key == "hidden") {
      c.ensemble.hidden = parse_uint(key, value, problems);
    } else if (key == "prop1_bias") {
      std::vector<double> bias;
      for (const auto& item : split_commas(value)) bias.push_back(parse_real(key, item, problems));
      c.prop1_bias = bias;
    } else if (key == "out") {
      c.out_dir = value;
    } else {
      problems.push_back(key + ": unknown setting");
    }
  }
  if (c.samples < 100) problems.push_back("samples: theorem checks need at least 100 draws");
  if (c.prop1_samples < 1000) problems.push_back("prop1_samples: needs at least 1000 draws");
  if (!(c.gamma > 0.0 && c.gamma <= 1.0)) problems.push_back("gamma: must lie in (0, 1]");
  if (c.chain_length < 4) problems.push_back("chain_length: must be at least 4");
  if (c.random_states < 1 || c.random_actions < 2)
    problems.push_back("random_states/random_actions: need at least 1 state and 2 actions");
  if (c.state >= std::min(c.chain_length, c.random_states))
    problems.push_back("state: out of range for one of the environments");
  if (c.ensemble.hidden == 0) problems.push_back("hidden: must be positive");
  if (!(c.ensemble.init.output_scale >= 0.0)) problems.push_back("init_scale: must be >= 0");
  if (c.prop1_bias && c.prop1_bias->size() != c.random_actions)
    problems.push_back("prop1_bias: needs one offset per action");
  if (!problems.empty()) throw ConfigError(problems);
  return c;
}

}  // namespace coact::bench
