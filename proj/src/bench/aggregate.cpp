#include "coact/bench/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

#include "coact/random.hpp"

namespace coact::bench {

Statistic parse_statistic(const std::string& name) {
  if (name == "median") return Statistic::Median;
  if (name == "percentile-20" || name == "p20") return Statistic::Percentile20;
  if (name == "percentile-80" || name == "p80") return Statistic::Percentile80;
  throw std::invalid_argument("unknown statistic '" + name + "'");
}

std::string to_string(Statistic s) {
  switch (s) {
    case Statistic::Median:
      return "median";
    case Statistic::Percentile20:
      return "percentile-20";
    case Statistic::Percentile80:
      return "percentile-80";
  }
  return "unknown";
}

double percentile(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("percentile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("percentile level outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double pos = p * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

double apply_statistic(Statistic s, const std::vector<double>& values) {
  switch (s) {
    case Statistic::Median:
      return percentile(values, 0.5);
    case Statistic::Percentile20:
      return percentile(values, 0.2);
    case Statistic::Percentile80:
      return percentile(values, 0.8);
  }
  throw std::invalid_argument("unknown statistic");
}

double bootstrap_se(Statistic s, const std::vector<double>& values, std::size_t resamples,
                    std::uint64_t seed) {
  if (values.empty()) throw std::invalid_argument("bootstrap of an empty sample");
  if (resamples < 2) return 0.0;
  Rng rng(seed);
  std::vector<double> stats;
  stats.reserve(resamples);
  std::vector<double> draw(values.size());
  for (std::size_t b = 0; b < resamples; ++b) {
    for (double& x : draw) x = values[uniform_index(rng, values.size())];
    stats.push_back(apply_statistic(s, draw));
  }
  double mean = 0.0;
  for (double x : stats) mean += x;
  mean /= static_cast<double>(stats.size());
  double ss = 0.0;
  for (double x : stats) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(stats.size() - 1));
}

namespace {

std::string key_field(const RunRow& r, const std::string& key) {
  if (key == "seed") return std::to_string(r.seed);
  if (key == "strategy") return r.strategy;
  if (key == "epsilon") return format_real(r.epsilon);
  if (key == "iteration") return std::to_string(r.iteration);
  throw std::invalid_argument("unknown group-by key '" + key + "'");
}

}  // namespace

AggregateResult aggregate(const std::vector<RunRow>& rows, Statistic statistic,
                          const std::vector<std::string>& group_by, std::size_t resamples,
                          std::uint64_t seed) {
  AggregateResult result;
  result.group_by = group_by;
  result.statistic = statistic;
  if (!rows.empty())
    for (const auto& k : group_by) (void)key_field(rows.front(), k);

  std::vector<std::vector<std::string>> order;
  std::map<std::vector<std::string>, std::size_t> index;
  std::vector<std::vector<double>> returns, tds;
  for (const auto& r : rows) {
    std::vector<std::string> key;
    for (const auto& k : group_by) key.push_back(key_field(r, k));
    auto [it, inserted] = index.emplace(key, order.size());
    if (inserted) {
      order.push_back(key);
      returns.emplace_back();
      tds.emplace_back();
    }
    if (std::isfinite(r.eval_return)) returns[it->second].push_back(r.eval_return);
    if (std::isfinite(r.mean_td)) tds[it->second].push_back(r.mean_td);
  }

  for (std::size_t g = 0; g < order.size(); ++g) {
    for (const auto& [column, values] :
         {std::pair<std::string, const std::vector<double>*>{"eval_return", &returns[g]},
          std::pair<std::string, const std::vector<double>*>{"mean_td", &tds[g]}}) {
      if (values->empty()) {
        std::string name;
        for (std::size_t i = 0; i < order[g].size(); ++i)
          name += (i ? "," : "") + group_by[i] + "=" + order[g][i];
        result.warnings.push_back("group {" + name + "} has no finite " + column +
                                  " values; omitted");
        continue;
      }
      const std::uint64_t group_seed = derive_seed(seed, {g, column == "mean_td" ? 1u : 0u});
      result.rows.push_back({order[g], column, apply_statistic(statistic, *values),
                             bootstrap_se(statistic, *values, resamples, group_seed),
                             values->size()});
    }
  }
  return result;
}

void write_summary_csv(std::ostream& out, const AggregateResult& result) {
  for (const auto& k : result.group_by) out << k << ',';
  out << "column,statistic,value,se,n\n";
  for (const auto& r : result.rows) {
    for (const auto& k : r.key) out << k << ',';
    out << r.column << ',' << to_string(result.statistic) << ',' << format_real(r.value) << ','
        << format_real(r.standard_error) << ',' << r.count << '\n';
  }
}

}  // namespace coact::bench
