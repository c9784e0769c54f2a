#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace coact::bench {

inline constexpr std::string_view kRunCsvHeader =
    "seed,strategy,epsilon,iteration,eval_return,mean_td,env_steps";

struct RunRow {
  std::size_t seed = 0;
  std::string strategy;
  double epsilon = 0.0;
  std::size_t iteration = 0;
  double eval_return = 0.0;
  double mean_td = 0.0;
  std::uint64_t env_steps = 0;
};

class CsvParseError : public std::runtime_error {
 public:
  CsvParseError(std::size_t line, const std::string& message);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Shortest decimal that round-trips; "nan" for NaN.
std::string format_real(double v);

void write_run_csv(std::ostream& out, const std::vector<RunRow>& rows);
std::vector<RunRow> read_run_csv(std::istream& in);
std::vector<RunRow> read_run_csv_file(const std::string& path);

/// Writes `contents` to a sibling temporary and renames it over `path`.
void write_file_atomically(const std::string& path, const std::string& contents);

}  // namespace coact::bench
