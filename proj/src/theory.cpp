#include "coact/theory.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace coact {

QTable make_member(const EnsembleSpec& spec, std::size_t num_states, std::size_t num_actions,
                   std::uint64_t stream, std::uint64_t k) {
  const std::uint64_t seed = derive_seed(spec.init.seed, {stream, k});
  if (spec.model == ModelKind::Network) {
    InitSpec init = spec.init;
    init.seed = seed;
    const QNetwork net = init_network_unchecked(init, {num_states, spec.hidden, num_actions});
    QTable table(num_states, num_actions);
    for (StateIndex s = 0; s < num_states; ++s) {
      const auto row = net.action_values(s);
      std::copy(row.begin(), row.end(), table.action_values(s).begin());
    }
    return table;
  }
  const auto& offsets = spec.init.head_offsets;
  if (!offsets.empty() && offsets.size() != num_actions)
    throw std::invalid_argument("EnsembleSpec: one head offset per action required");
  Rng rng(seed);
  QTable table(num_states, num_actions);
  for (StateIndex s = 0; s < num_states; ++s)
    for (ActionIndex a = 0; a < num_actions; ++a)
      table(s, a) = draw_init(spec.init.family, spec.init.output_scale, rng) +
                    (offsets.empty() ? 0.0 : offsets[a]);
  return table;
}

std::vector<QTable> make_ensemble(const EnsembleSpec& spec, std::size_t num_states,
                                  std::size_t num_actions, std::size_t count,
                                  std::uint64_t stream) {
  spec.init.validate();
  std::vector<QTable> members;
  members.reserve(count);
  for (std::size_t k = 0; k < count; ++k)
    members.push_back(make_member(spec, num_states, num_actions, stream, k));
  return members;
}

std::vector<StateIndex> probe_states(const Mdp& mdp, StateIndex state, ProbeSet set,
                                     std::uint64_t seed) {
  if (set == ProbeSet::Exhaustive) return all_states(mdp);
  std::vector<StateIndex> probes{mdp.initial_state(), state};
  std::vector<StateIndex> rest;
  for (StateIndex s = 0; s < mdp.num_states(); ++s)
    if (s != mdp.initial_state() && s != state) rest.push_back(s);
  Rng rng(derive_seed(seed, {3}));
  std::shuffle(rest.begin(), rest.end(), rng);
  rest.resize(std::min<std::size_t>(rest.size(), 5));
  probes.insert(probes.end(), rest.begin(), rest.end());
  std::sort(probes.begin(), probes.end());
  probes.erase(std::unique(probes.begin(), probes.end()), probes.end());
  return probes;
}

namespace {

bool constant_row(std::span<const double> row) {
  return std::all_of(row.begin(), row.end(), [&](double v) { return v == row.front(); });
}

/// Shared Monte-Carlo body. `bootstrap(k, s')` is the value the TD target
/// bootstraps from for member k.
template <typename Bootstrap>
TheoremReport run_theorem(const Mdp& mdp, const std::vector<QTable>& theta, StateIndex state,
                          const VerifyOptions& options, Bootstrap&& bootstrap, Estimate delta,
                          Estimate eta, std::string check) {
  const std::size_t k_count = theta.size();
  const double gamma = mdp.gamma();
  std::vector<double> lhs(k_count), rhs(k_count), gap(k_count), diff(k_count);
  bool degenerate = true;
  for (std::size_t k = 0; k < k_count; ++k) {
    const auto row = theta[k].action_values(state);
    degenerate = degenerate && constant_row(row);
    Rng rng(derive_seed(options.seed, {2, k}));
    const ActionIndex a_min = argmin_action(row);
    const StateIndex next_min = mdp.sample_next(state, a_min, rng);
    const ActionIndex a_uniform = uniform_index(rng, mdp.num_actions());
    const StateIndex next_uniform = mdp.sample_next(state, a_uniform, rng);
    lhs[k] = mdp.reward(state, a_min) + gamma * bootstrap(k, next_min) - row[a_min];
    rhs[k] = mdp.reward(state, a_uniform) + gamma * bootstrap(k, next_uniform) - row[a_uniform];
    double mean = 0.0;
    for (double v : row) mean += v;
    gap[k] = mean / static_cast<double>(row.size()) - row[a_min];
    diff[k] = lhs[k] - rhs[k] - gap[k];
  }
  TheoremReport r;
  r.check = std::move(check);
  r.state = state;
  r.samples = k_count;
  r.lhs = mean_with_se(lhs);
  r.rhs = mean_with_se(rhs);
  r.d_hat = mean_with_se(gap);
  r.eta_hat = eta;
  r.delta_hat = delta;
  r.margin = r.lhs.value - r.rhs.value - r.d_hat.value + 2.0 * r.delta_hat.value + r.eta_hat.value;
  const double se_diff = mean_with_se(diff).standard_error;
  r.margin_se = std::sqrt(se_diff * se_diff + 4.0 * delta.standard_error * delta.standard_error +
                          eta.standard_error * eta.standard_error);
  r.degenerate = degenerate;
  r.pass = r.margin + 3.0 * r.margin_se > 0.0;
  return r;
}

void check_samples(std::size_t samples) {
  if (samples < 100) throw std::invalid_argument("theorem verification needs at least 100 draws");
}

}  // namespace

TheoremReport verify_theorem1(const Mdp& mdp, const EnsembleSpec& spec, StateIndex state,
                              std::size_t samples, const VerifyOptions& options) {
  check_samples(samples);
  if (state >= mdp.num_states()) throw std::invalid_argument("verify: state out of range");
  const auto theta = make_ensemble(spec, mdp.num_states(), mdp.num_actions(), samples, 0);
  const auto probes = probe_states(mdp, state, options.probes, options.seed);
  Rng rule_rng(derive_seed(options.seed, {4}));
  const Estimate delta = estimate_delta(theta, mdp, options.delta_rule, probes, rule_rng);
  const Estimate eta = estimate_eta(theta, mdp, probes);
  return run_theorem(
      mdp, theta, state, options,
      [&](std::size_t k, StateIndex s) { return max_value(theta[k].action_values(s)); }, delta,
      eta, "theorem1");
}

TheoremReport verify_theorem2(const Mdp& mdp, const EnsembleSpec& spec, StateIndex state,
                              std::size_t samples, const VerifyOptions& options) {
  check_samples(samples);
  if (state >= mdp.num_states()) throw std::invalid_argument("verify: state out of range");
  const auto theta = make_ensemble(spec, mdp.num_states(), mdp.num_actions(), samples, 0);
  const auto theta_hat = options.share_ensembles
                             ? theta
                             : make_ensemble(spec, mdp.num_states(), mdp.num_actions(), samples, 1);
  const auto probes = probe_states(mdp, state, options.probes, options.seed);
  Rng rule_rng(derive_seed(options.seed, {4}));
  const Estimate delta =
      estimate_delta(theta, theta_hat, mdp, options.delta_rule, probes, rule_rng);
  const Estimate eta = estimate_eta(theta, mdp, probes);
  return run_theorem(
      mdp, theta, state, options,
      [&](std::size_t k, StateIndex s) { return theta_hat[k](s, greedy_action(theta[k], s)); },
      delta, eta, "theorem2");
}

double chi_square_survival(double statistic, double degrees_of_freedom) {
  if (!(degrees_of_freedom > 0.0)) throw std::invalid_argument("chi-square: df must be positive");
  if (statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(degrees_of_freedom / 2.0, statistic / 2.0);
}

double chi_square_uniform(const std::vector<std::uint64_t>& counts) {
  if (counts.size() < 2) throw std::invalid_argument("chi-square: need at least two cells");
  double total = 0.0;
  for (auto c : counts) total += static_cast<double>(c);
  if (total == 0.0) throw std::invalid_argument("chi-square: no observations");
  const double expected = total / static_cast<double>(counts.size());
  double stat = 0.0;
  for (auto c : counts) {
    const double d = static_cast<double>(c) - expected;
    stat += d * d / expected;
  }
  return stat;
}

Prop1Report verify_prop1(const EnsembleSpec& spec, std::size_t num_states,
                         std::size_t num_actions, StateIndex state, std::size_t samples,
                         bool require_exchangeable) {
  if (samples < 1000) throw std::invalid_argument("verify_prop1: needs at least 1000 draws");
  if (state >= num_states) throw std::invalid_argument("verify_prop1: state out of range");
  if (require_exchangeable && !spec.init.exchangeable())
    throw std::invalid_argument("verify_prop1: output heads must be exchangeable");

  Prop1Report report;
  report.samples = samples;
  report.frequencies.assign(num_actions, 0);
  for (std::size_t k = 0; k < samples; ++k)
    ++report.frequencies[min_action(make_member(spec, num_states, num_actions, 0, k), state)];
  report.chi_square = chi_square_uniform(report.frequencies);
  report.p_value = chi_square_survival(report.chi_square, static_cast<double>(num_actions - 1));

  // Conditional law given theta: rebuild each of 100 members from its seed and
  // query the argmin repeatedly.
  constexpr std::size_t kFixedDraws = 100;
  constexpr int kQueries = 10;
  bool constant = true;
  for (std::size_t k = 0; k < kFixedDraws && constant; ++k) {
    const QTable reference = make_member(spec, num_states, num_actions, 0, k);
    const ActionIndex first = min_action(reference, state);
    for (int q = 0; q < kQueries; ++q) {
      const QTable again = make_member(spec, num_states, num_actions, 0, k);
      if (min_action(again, state) != first || min_action(reference, state) != first) {
        constant = false;
        break;
      }
    }
  }
  report.conditionally_constant = constant;
  return report;
}

std::string theory_csv_header() {
  return "check,environment,state,samples,lhs_mean,lhs_se,rhs_mean,rhs_se,d_hat,d_se,eta_hat,"
         "eta_se,delta_hat,delta_se,margin,margin_se,statistic,p_value,degenerate,verdict";
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::string to_csv_row(const std::string& environment, const TheoremReport& r) {
  std::ostringstream os;
  os << r.check << ',' << environment << ',' << r.state << ',' << r.samples << ','
     << fmt(r.lhs.value) << ',' << fmt(r.lhs.standard_error) << ',' << fmt(r.rhs.value) << ','
     << fmt(r.rhs.standard_error) << ',' << fmt(r.d_hat.value) << ','
     << fmt(r.d_hat.standard_error) << ',' << fmt(r.eta_hat.value) << ','
     << fmt(r.eta_hat.standard_error) << ',' << fmt(r.delta_hat.value) << ','
     << fmt(r.delta_hat.standard_error) << ',' << fmt(r.margin) << ',' << fmt(r.margin_se)
     << ",,," << (r.degenerate ? 1 : 0) << ',' << (r.pass ? "pass" : "fail");
  return os.str();
}

std::string to_csv_row(const std::string& environment, const std::string& check,
                       StateIndex state, const Prop1Report& r) {
  const bool pass = r.uniform_at(kProp1Significance) && r.conditionally_constant;
  std::ostringstream os;
  os << check << ',' << environment << ',' << state << ',' << r.samples << ",,,,,,,,,,,,,"
     << fmt(r.chi_square) << ',' << fmt(r.p_value) << ",0," << (pass ? "pass" : "fail");
  return os.str();
}

void print_report(std::ostream& out, const std::string& environment, const TheoremReport& r) {
  out << r.check << " on " << environment << " at state " << r.state << " (K=" << r.samples
      << ")\n"
      << "  TD(argmin)  = " << r.lhs.value << " +- " << r.lhs.standard_error << '\n'
      << "  TD(uniform) = " << r.rhs.value << " +- " << r.rhs.standard_error << '\n'
      << "  D(s)        = " << r.d_hat.value << " +- " << r.d_hat.standard_error << '\n'
      << "  eta         = " << r.eta_hat.value << " +- " << r.eta_hat.standard_error << '\n'
      << "  delta       = " << r.delta_hat.value << " +- " << r.delta_hat.standard_error << '\n'
      << "  margin      = " << r.margin << " +- " << r.margin_se
      << (r.degenerate ? "  [degenerate ensemble]" : "") << "  => " << (r.pass ? "PASS" : "FAIL")
      << '\n';
}

}  // namespace coact
