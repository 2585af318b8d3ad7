#pragma once

// CSV output with a version line, a header row and full-precision numbers.

#include "uavloc/core.hpp"

#include <cstdio>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

namespace uavloc {

inline constexpr const char* kCsvVersion = "# coop-loc-sec v1";

class IoError : public Error {
 public:
  using Error::Error;
};

// Shortest decimal text that reads back to the same double.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

using CsvCell = std::variant<double, long long, std::string>;

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns)
      : path_(path), columns_(columns.size()), out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw IoError(concat("cannot open '", path, "' for writing"));
    out_ << kCsvVersion << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
    out_ << '\n';
  }

  void row(const std::vector<CsvCell>& cells) {
    if (cells.size() != columns_) throw UsageError(concat("CSV row has ", cells.size(), " cells, expected ", columns_));
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      if (const auto* d = std::get_if<double>(&cells[i]))
        out_ << format_number(*d);
      else if (const auto* n = std::get_if<long long>(&cells[i]))
        out_ << *n;
      else
        out_ << std::get<std::string>(cells[i]);
    }
    out_ << '\n';
    if (!out_) throw IoError(concat("write failed on '", path_, "'"));
  }

  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::size_t columns_;
  std::ofstream out_;
};

}  // namespace uavloc
