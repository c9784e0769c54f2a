#include "coact/bench/verify_suite.hpp"

#include <ostream>

#include "coact/random.hpp"

namespace coact::bench {

namespace {

void log_prop1(std::ostream& log, const std::string& label, const Prop1Report& r, bool pass) {
  log << label << " (K=" << r.samples << ")\n  argmin counts =";
  for (auto c : r.frequencies) log << ' ' << c;
  log << "\n  chi2 = " << r.chi_square << ", p = " << r.p_value
      << ", conditionally constant = " << (r.conditionally_constant ? "yes" : "no") << "\n  "
      << (pass ? "PASS" : "FAIL") << '\n';
}

}  // namespace

VerifySuiteResult run_verify_suite(const VerifySuiteConfig& config, std::ostream& log) {
  VerifySuiteResult result;
  EnsembleSpec spec = config.ensemble;
  spec.init.seed = derive_seed(config.master_seed, {5});
  VerifyOptions options;
  options.seed = derive_seed(config.master_seed, {6});

  const Mdp chain = build_chain_mdp({config.chain_length}, config.gamma);
  Rng env_rng(derive_seed(config.master_seed, {2}));
  const Mdp random =
      random_mdp(config.random_states, config.random_actions, env_rng, config.gamma);
  const std::string chain_name = "chain" + std::to_string(config.chain_length);
  const std::string random_name =
      "random" + std::to_string(config.random_states) + "x" + std::to_string(config.random_actions);

  for (const auto& [name, mdp] : {std::pair<std::string, const Mdp*>{chain_name, &chain},
                                  std::pair<std::string, const Mdp*>{random_name, &random}}) {
    for (int which = 1; which <= 2; ++which) {
      const TheoremReport r = which == 1
                                  ? verify_theorem1(*mdp, spec, config.state, config.samples, options)
                                  : verify_theorem2(*mdp, spec, config.state, config.samples, options);
      print_report(log, name, r);
      result.csv_rows.push_back(to_csv_row(name, r));
      result.all_pass = result.all_pass && r.pass;
    }
  }

  const Prop1Report p = verify_prop1(spec, config.random_states, config.random_actions,
                                     config.state, config.prop1_samples);
  const bool p_pass = p.uniform_at(kProp1Significance) && p.conditionally_constant;
  log_prop1(log, "prop1 on " + random_name, p, p_pass);
  result.csv_rows.push_back(to_csv_row(random_name, "prop1", config.state, p));
  result.all_pass = result.all_pass && p_pass;

  if (config.prop1_bias) {
    EnsembleSpec biased = spec;
    biased.init.head_offsets = *config.prop1_bias;
    const Prop1Report b = verify_prop1(biased, config.random_states, config.random_actions,
                                       config.state, config.prop1_samples, false);
    const bool b_pass = b.uniform_at(kProp1Significance) && b.conditionally_constant;
    log_prop1(log, "prop1-biased on " + random_name, b, b_pass);
    result.csv_rows.push_back(to_csv_row(random_name, "prop1-biased", config.state, b));
    result.all_pass = result.all_pass && b_pass;
  }
  return result;
}

}  // namespace coact::bench
