#include "cqa/wind.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>

#include "cqa/errors.hpp"

namespace cqa {
namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '"' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return std::string(s);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

int parse_digits(const std::string& text, std::size_t pos, std::size_t count) {
  if (pos + count > text.size()) throw InvalidInput("truncated timestamp '" + text + "'");
  int value = 0;
  const char* first = text.data() + pos;
  const auto [ptr, ec] = std::from_chars(first, first + count, value);
  if (ec != std::errc() || ptr != first + count) throw InvalidInput("malformed timestamp '" + text + "'");
  return value;
}

void expect_char(const std::string& text, std::size_t pos, std::string_view allowed) {
  if (pos >= text.size() || allowed.find(text[pos]) == std::string_view::npos) {
    throw InvalidInput("malformed timestamp '" + text + "'");
  }
}

double parse_direction(const std::string& text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw InvalidInput("unparseable direction '" + text + "'");
  }
  if (!(value >= 0.0 && value < 360.0)) {
    throw InvalidInput("direction " + text + " outside [0, 360)");
  }
  return value;
}

constexpr std::array<const char*, 12> kMonthNames{"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                                  "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

}  // namespace

std::chrono::sys_seconds parse_iso8601(const std::string& raw) {
  using namespace std::chrono;
  std::string text = raw;
  if (!text.empty() && (text.back() == 'Z' || text.back() == 'z')) text.pop_back();
  const int y = parse_digits(text, 0, 4);
  expect_char(text, 4, "-");
  const int mo = parse_digits(text, 5, 2);
  expect_char(text, 7, "-");
  const int d = parse_digits(text, 8, 2);
  int h = 0, mi = 0, s = 0;
  if (text.size() > 10) {
    expect_char(text, 10, "T ");
    h = parse_digits(text, 11, 2);
    if (text.size() > 13) {
      expect_char(text, 13, ":");
      mi = parse_digits(text, 14, 2);
      if (text.size() > 16) {
        expect_char(text, 16, ":");
        s = parse_digits(text, 17, 2);
        if (text.size() > 19) throw InvalidInput("unsupported timestamp suffix in '" + raw + "'");
      }
    }
  }
  const year_month_day date{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!date.ok() || h > 23 || mi > 59 || s > 59) throw InvalidInput("invalid calendar time '" + raw + "'");
  return sys_days{date} + hours{h} + minutes{mi} + seconds{s};
}

WindIngest ingest_wind_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("'" + path + "' is empty; a header row is required");

  const auto header = split_csv(line);
  auto column = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw InvalidInput("'" + path + "' has no '" + name + "' column");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t station_col = column("station");
  const std::size_t time_col = column("timestamp");
  const std::size_t dir_col = column("direction_deg");
  const std::size_t needed = std::max({station_col, time_col, dir_col}) + 1;

  WindIngest out;
  std::map<std::string, std::map<std::chrono::sys_seconds, WindRecord>> by_station;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    ++out.rows_in;
    try {
      const auto fields = split_csv(line);
      if (fields.size() < needed) throw InvalidInput("expected at least " + std::to_string(needed) + " fields");
      WindRecord record;
      record.station = fields[station_col];
      if (record.station.empty()) throw InvalidInput("empty station identifier");
      record.timestamp = parse_iso8601(fields[time_col]);
      record.direction = parse_direction(fields[dir_col]) * std::numbers::pi / 180.0;
      auto& series = by_station[record.station];
      const auto [it, inserted] = series.insert_or_assign(record.timestamp, record);
      if (!inserted) {
        ++out.duplicates_replaced;
        out.warnings.push_back("line " + std::to_string(line_no) + ": duplicate timestamp " +
                               fields[time_col] + " for station " + record.station +
                               "; keeping this later row");
      }
      ++out.accepted;
    } catch (const InvalidInput& e) {
      ++out.rejected;
      out.errors.push_back({line_no, e.what()});
    }
  }

  if (static_cast<double>(out.rejected) > kMaxInvalidFraction * static_cast<double>(out.rows_in)) {
    std::ostringstream msg;
    msg << "'" << path << "': " << out.rejected << " of " << out.rows_in
        << " rows invalid (limit 5%)";
    for (std::size_t k = 0; k < std::min<std::size_t>(out.errors.size(), 5); ++k) {
      msg << "\n  line " << out.errors[k].line << ": " << out.errors[k].message;
    }
    throw InvalidInput(msg.str());
  }

  for (auto& [station, rows] : by_station) {
    auto& records = out.stations[station];
    records.reserve(rows.size());
    for (auto& [time, record] : rows) records.push_back(std::move(record));
  }
  return out;
}

bool is_winter_month(unsigned month) { return month == 12 || month == 1 || month == 2 || month == 3; }

bool is_summer_month(unsigned month) { return month >= 6 && month <= 9; }

std::string month_label(int year, unsigned month) {
  if (month < 1 || month > 12) throw InvalidInput("month must be in 1..12");
  const int yy = ((year % 100) + 100) % 100;
  std::string label = kMonthNames[month - 1];
  label += ' ';
  label += static_cast<char>('0' + yy / 10);
  label += static_cast<char>('0' + yy % 10);
  return label;
}

MonthlySplit monthly_split(const std::vector<WindRecord>& records, MonthFilter filter) {
  using namespace std::chrono;
  if (records.empty()) throw InvalidInput("monthly_split: no records");
  std::map<std::pair<int, unsigned>, std::vector<double>> buckets;
  for (const auto& record : records) {
    const year_month_day date{floor<days>(record.timestamp)};
    const unsigned mo = static_cast<unsigned>(date.month());
    if (filter == MonthFilter::WinterSummer && !is_winter_month(mo) && !is_summer_month(mo)) continue;
    buckets[{static_cast<int>(date.year()), mo}].push_back(record.direction);
  }
  MonthlySplit out;
  for (auto& [key, values] : buckets) {
    const std::string label = month_label(key.first, key.second);
    if (values.size() < 2) {
      out.warnings.push_back("month " + label + " has " + std::to_string(values.size()) +
                             " observation(s); dropped");
      continue;
    }
    out.months.push_back({label, key.first, key.second, CircularSeries(std::move(values))});
  }
  return out;
}

}  // namespace cqa
