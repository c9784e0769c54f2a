#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "coact/bench/run_csv.hpp"

namespace coact::bench {

enum class Statistic { Median, Percentile20, Percentile80 };

Statistic parse_statistic(const std::string& name);
std::string to_string(Statistic s);

/// Linear interpolation between closest ranks: position p * (n - 1) in the
/// sorted sample. `p` in [0, 1].
double percentile(std::vector<double> values, double p);
double apply_statistic(Statistic s, const std::vector<double>& values);

/// Standard deviation of the statistic over `resamples` bootstrap resamples.
double bootstrap_se(Statistic s, const std::vector<double>& values, std::size_t resamples,
                    std::uint64_t seed);

struct SummaryRow {
  std::vector<std::string> key;  // one entry per group-by column
  std::string column;            // eval_return or mean_td
  double value = 0.0;
  double standard_error = 0.0;
  std::size_t count = 0;
};

struct AggregateResult {
  std::vector<std::string> group_by;
  Statistic statistic = Statistic::Median;
  std::vector<SummaryRow> rows;
  std::vector<std::string> warnings;
};

/// Valid group-by keys: seed, strategy, epsilon, iteration. Groups appear in
/// order of first occurrence. Non-finite values are skipped; a group left
/// with no values is omitted and reported in `warnings`.
AggregateResult aggregate(const std::vector<RunRow>& rows, Statistic statistic,
                          const std::vector<std::string>& group_by, std::size_t resamples = 1000,
                          std::uint64_t seed = 0);

void write_summary_csv(std::ostream& out, const AggregateResult& result);

}  // namespace coact::bench
