#pragma once

// Ingestion of hourly wind-direction records and their split into monthly
// circular series.

#include <chrono>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "cqa/circular.hpp"

namespace cqa {

struct WindRecord {
  std::chrono::sys_seconds timestamp;
  double direction = 0.0;  // radians in [0, 2*pi)
  std::string station;
};

struct RowError {
  std::size_t line = 0;  // 1-based, header is line 1
  std::string message;
};

struct WindIngest {
  std::map<std::string, std::vector<WindRecord>> stations;  // sorted by time, unique timestamps
  std::vector<RowError> errors;
  std::vector<std::string> warnings;
  std::size_t rows_in = 0;
  std::size_t accepted = 0;  // rows_in == accepted + rejected
  std::size_t rejected = 0;
  std::size_t duplicates_replaced = 0;  // accepted rows superseded by a later row
};

/// Fraction of invalid rows above which ingestion aborts.
inline constexpr double kMaxInvalidFraction = 0.05;

/// Parses "YYYY-MM-DDTHH[:MM[:SS]][Z]" (a space may replace 'T').
std::chrono::sys_seconds parse_iso8601(const std::string& text);

/// Reads a CSV with header columns station, timestamp and direction_deg (any
/// order, extra columns ignored). Directions outside [0, 360) and unparseable
/// rows are rejected with their line numbers; a repeated (station, timestamp)
/// keeps the later row. Throws InvalidInput when a column is missing or when
/// more than 5% of rows are rejected.
WindIngest ingest_wind_csv(const std::string& path);

enum class MonthFilter {
  WinterSummer,  // Dec, Jan, Feb, Mar and Jun, Jul, Aug, Sep
  All,
};

struct MonthlySeries {
  std::string label;  // "MMM YY"
  int year = 0;
  unsigned month = 0;  // 1..12
  CircularSeries series;
};

struct MonthlySplit {
  std::vector<MonthlySeries> months;  // chronological
  std::vector<std::string> warnings;
};

bool is_winter_month(unsigned month);
bool is_summer_month(unsigned month);
std::string month_label(int year, unsigned month);

/// One series per calendar month present in `records`; months with fewer than
/// two observations are dropped with a warning.
MonthlySplit monthly_split(const std::vector<WindRecord>& records, MonthFilter filter);

}  // namespace cqa
