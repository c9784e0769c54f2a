#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "coact/mdp.hpp"
#include "coact/metrics.hpp"
#include "coact/network.hpp"
#include "coact/tabular.hpp"

namespace coact {

enum class ModelKind { Tabular, Network };

/// Distribution over value functions. Tabular members draw every entry from
/// init.family at init.output_scale (plus the head offset of its action);
/// network members are materialized into tables by evaluating every state.
struct EnsembleSpec {
  ModelKind model = ModelKind::Tabular;
  InitSpec init{InitFamily::Normal, 1.0, 0.1, 0.0, {}, 0};
  std::size_t hidden = 8;
};

/// Member k of stream j is seeded with derive_seed(spec.init.seed, {j, k}).
/// Stream 0 is the theta ensemble, stream 1 the independent theta-hat ensemble.
QTable make_member(const EnsembleSpec& spec, std::size_t num_states, std::size_t num_actions,
                   std::uint64_t stream, std::uint64_t k);
std::vector<QTable> make_ensemble(const EnsembleSpec& spec, std::size_t num_states,
                                  std::size_t num_actions, std::size_t count,
                                  std::uint64_t stream = 0);

struct TheoremReport {
  std::string check;
  StateIndex state = 0;
  std::size_t samples = 0;
  Estimate lhs;  // TD of the argmin action
  Estimate rhs;  // TD of a uniform action
  Estimate d_hat;
  Estimate eta_hat;
  Estimate delta_hat;
  double margin = 0.0;  // lhs - rhs - d_hat + 2 delta_hat + eta_hat
  double margin_se = 0.0;
  bool degenerate = false;  // every member's row at `state` is constant
  bool pass = false;        // margin + 3 * margin_se > 0

  friend bool operator==(const TheoremReport&, const TheoremReport&) = default;
};

enum class ProbeSet {
  /// Initial state, the tested state, and 5 further distinct states.
  Sampled,
  Exhaustive,
};

struct VerifyOptions {
  std::uint64_t seed = 0;
  ProbeSet probes = ProbeSet::Sampled;
  ProbeActionRule delta_rule = ProbeActionRule::Min;
  /// Theorem 2 only: use the theta ensemble as theta-hat.
  bool share_ensembles = false;
};

std::vector<StateIndex> probe_states(const Mdp& mdp, StateIndex state, ProbeSet set,
                                     std::uint64_t seed);

/// Per draw k, transitions and the uniform comparison action come from
/// Rng(derive_seed(options.seed, {2, k})).
TheoremReport verify_theorem1(const Mdp& mdp, const EnsembleSpec& spec, StateIndex state,
                              std::size_t samples, const VerifyOptions& options = {});

/// Double-Q form: the theta-hat ensemble evaluates theta's argmax at s'.
TheoremReport verify_theorem2(const Mdp& mdp, const EnsembleSpec& spec, StateIndex state,
                              std::size_t samples, const VerifyOptions& options = {});

struct Prop1Report {
  std::vector<std::uint64_t> frequencies;  // argmin counts per action
  double chi_square = 0.0;
  double p_value = 0.0;
  bool conditionally_constant = false;
  std::size_t samples = 0;

  bool uniform_at(double significance) const { return p_value > significance; }
};

/// Upper tail of the chi-square distribution.
double chi_square_survival(double statistic, double degrees_of_freedom);
/// Pearson statistic against equal expected counts.
double chi_square_uniform(const std::vector<std::uint64_t>& counts);

/// Argmin frequencies at `state` over `samples` members against the uniform
/// law, plus a check that 100 fixed members give the same argmin on repeated
/// evaluation. Throws std::invalid_argument if the spec's heads are not
/// exchangeable, unless `require_exchangeable` is false.
Prop1Report verify_prop1(const EnsembleSpec& spec, std::size_t num_states,
                         std::size_t num_actions, StateIndex state, std::size_t samples,
                         bool require_exchangeable = true);

inline constexpr double kProp1Significance = 0.01;

/// Theory report CSV header (single line, no trailing newline).
std::string theory_csv_header();
std::string to_csv_row(const std::string& environment, const TheoremReport& r);
std::string to_csv_row(const std::string& environment, const std::string& check,
                       StateIndex state, const Prop1Report& r);
void print_report(std::ostream& out, const std::string& environment, const TheoremReport& r);

}  // namespace coact
