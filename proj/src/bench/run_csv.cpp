#include "coact/bench/run_csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace coact::bench {

CsvParseError::CsvParseError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("format_real: conversion failed");
  return std::string(buf, ptr);
}

void write_run_csv(std::ostream& out, const std::vector<RunRow>& rows) {
  out << kRunCsvHeader << '\n';
  for (const auto& r : rows)
    out << r.seed << ',' << r.strategy << ',' << format_real(r.epsilon) << ',' << r.iteration << ','
        << format_real(r.eval_return) << ',' << format_real(r.mean_td) << ',' << r.env_steps
        << '\n';
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double to_real(const std::string& s, std::size_t line, const char* column) {
  if (s == "nan") return std::nan("");
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw CsvParseError(line, std::string("malformed ") + column + " '" + s + "'");
  return v;
}

std::uint64_t to_uint(const std::string& s, std::size_t line, const char* column) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw CsvParseError(line, std::string("malformed ") + column + " '" + s + "'");
  return v;
}

}  // namespace

std::vector<RunRow> read_run_csv(std::istream& in) {
  std::string line;
  std::size_t number = 1;
  if (!std::getline(in, line)) throw CsvParseError(1, "missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kRunCsvHeader) throw CsvParseError(1, "unexpected header '" + line + "'");
  std::vector<RunRow> rows;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != 7)
      throw CsvParseError(number, "expected 7 fields, found " + std::to_string(f.size()));
    RunRow r;
    r.seed = to_uint(f[0], number, "seed");
    if (f[1].empty()) throw CsvParseError(number, "empty strategy");
    r.strategy = f[1];
    r.epsilon = to_real(f[2], number, "epsilon");
    r.iteration = to_uint(f[3], number, "iteration");
    r.eval_return = to_real(f[4], number, "eval_return");
    r.mean_td = to_real(f[5], number, "mean_td");
    r.env_steps = to_uint(f[6], number, "env_steps");
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<RunRow> read_run_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_run_csv(in);
}

void write_file_atomically(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, target);
}

}  // namespace coact::bench
