#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "wind_fixture.hpp"

#include "cqa/commands.hpp"
#include "cqa/errors.hpp"
#include "cqa/io.hpp"
#include "cqa/wind.hpp"

using namespace cqa;
namespace fs = std::filesystem;
using namespace std::chrono;

namespace {

class TempDir {
 public:
  explicit TempDir(const std::string& name) {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("cqa_test_" + name + "_" + std::to_string(system_clock::now().time_since_epoch().count()) + "_" +
             std::to_string(++counter));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

std::string write_file(const TempDir& dir, const std::string& name, const std::string& content) {
  const std::string path = dir.file(name);
  std::ofstream(path) << content;
  return path;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

// Hourly rows for one station; directions cycle through whole degrees.
std::string hourly_rows(int count, const std::vector<std::pair<int, std::string>>& overrides = {}) {
  std::string out = "station,timestamp,direction_deg\n";
  for (int k = 0; k < count; ++k) {
    std::string dir = std::to_string(k % 360);
    for (const auto& [index, text] : overrides) {
      if (index == k) dir = text;
    }
    char stamp[32];
    std::snprintf(stamp, sizeof stamp, "2011-03-%02dT%02d:00:00Z", 1 + k / 24, k % 24);
    out += "A," + std::string(stamp) + "," + dir + "\n";
  }
  return out;
}

std::vector<WindRecord> hourly_records(int first_year, int last_year) {
  std::vector<WindRecord> out;
  const sys_seconds start{sys_days{year{first_year} / 1 / 1}};
  const sys_seconds stop{sys_days{year{last_year + 1} / 1 / 1}};
  int k = 0;
  for (sys_seconds t = start; t < stop; t += hours{1}, ++k) out.push_back({t, 0.01 * (k % 600), "A"});
  return out;
}

RunConfig small_cluster_config(const std::string& out) {
  RunConfig c;
  c.scenario = 2;
  c.length = 150;
  c.lags = {1};
  c.radius = {0.8, 1.2};
  c.clusters = {3};
  c.fuzziness = {1.3, 1.6};
  c.restarts = 4;
  c.seed = 11;
  c.out = out;
  return c;
}

}  // namespace

TEST_CASE("a three row wind file converts degrees to radians") {
  TempDir dir("wind3");
  const std::string path = write_file(dir, "wind.csv",
                                      "station,timestamp,direction_deg\n"
                                      "X,2012-01-01T00:00:00Z,0\n"
                                      "X,2012-01-01T01:00:00Z,90.5\n"
                                      "X,2012-01-01T02:00:00Z,359.999\n");
  const WindIngest w = ingest_wind_csv(path);
  CHECK(w.rows_in == 3);
  CHECK(w.accepted == 3);
  CHECK(w.rejected == 0);
  REQUIRE(w.stations.count("X") == 1);
  const auto& r = w.stations.at("X");
  REQUIRE(r.size() == 3);
  CHECK(r[0].direction == 0.0);
  CHECK(r[1].direction == doctest::Approx(90.5 * std::numbers::pi / 180.0).epsilon(1e-15));
  CHECK(r[2].direction == doctest::Approx(359.999 * std::numbers::pi / 180.0).epsilon(1e-15));
  CHECK(r[2].direction < kTwoPi);
}

TEST_CASE("columns may appear in any order next to extra columns") {
  TempDir dir("order");
  const std::string path = write_file(dir, "wind.csv",
                                      "speed,direction_deg,timestamp,station\n"
                                      "3.1,45,2012-05-01T02:00:00Z,B\n"
                                      "2.2,10,2012-05-01T00:00:00Z,B\n");
  const WindIngest w = ingest_wind_csv(path);
  const auto& r = w.stations.at("B");
  REQUIRE(r.size() == 2);
  CHECK(r[0].timestamp < r[1].timestamp);
  CHECK(r[0].direction == doctest::Approx(10.0 * std::numbers::pi / 180.0));
}

TEST_CASE("invalid directions are rejected with line numbers") {
  TempDir dir("reject");
  // Two bad rows in forty is exactly 5%, which is still tolerated.
  const std::string ok = write_file(dir, "ok.csv", hourly_rows(40, {{4, "360.0"}, {10, "north"}}));
  const WindIngest w = ingest_wind_csv(ok);
  CHECK(w.rows_in == 40);
  CHECK(w.rejected == 2);
  CHECK(w.accepted == 38);
  CHECK(w.rows_in == w.accepted + w.rejected);
  REQUIRE(w.errors.size() == 2);
  CHECK(w.errors[0].line == 6);
  CHECK(w.errors[1].line == 12);
  CHECK(w.errors[0].message.find("360") != std::string::npos);
  CHECK(w.stations.at("A").size() == 38);

  const std::string bad = write_file(dir, "bad.csv", hourly_rows(40, {{4, "360.0"}, {10, "north"}, {20, "-1"}}));
  CHECK_THROWS_AS(ingest_wind_csv(bad), InvalidInput);
  try {
    ingest_wind_csv(bad);
  } catch (const InvalidInput& e) {
    CHECK(std::string(e.what()).find("line 22") != std::string::npos);
  }
}

TEST_CASE("a duplicated timestamp keeps the later row") {
  TempDir dir("dup");
  const std::string path = write_file(dir, "wind.csv",
                                      "station,timestamp,direction_deg\n"
                                      "A,2013-07-01T00:00:00Z,10\n"
                                      "A,2013-07-01T01:00:00Z,20\n"
                                      "A,2013-07-01T00:00:00Z,30\n");
  const WindIngest w = ingest_wind_csv(path);
  CHECK(w.rows_in == 3);
  CHECK(w.accepted == 3);
  CHECK(w.duplicates_replaced == 1);
  REQUIRE(w.warnings.size() == 1);
  CHECK(w.warnings[0].find("line 4") != std::string::npos);
  const auto& r = w.stations.at("A");
  REQUIRE(r.size() == 2);
  CHECK(r[0].direction == doctest::Approx(30.0 * std::numbers::pi / 180.0));
}

TEST_CASE("structural problems abort ingestion") {
  TempDir dir("struct");
  CHECK_THROWS_AS(ingest_wind_csv(write_file(dir, "nocol.csv", "station,timestamp,dir\nA,2012-01-01T00,4\n")),
                  InvalidInput);
  CHECK_THROWS_AS(ingest_wind_csv(write_file(dir, "empty.csv", "")), InvalidInput);
  CHECK_THROWS_AS(ingest_wind_csv(dir.file("absent.csv")), InvalidInput);
}

TEST_CASE("timestamp parsing") {
  const sys_seconds midnight{sys_days{2010y / January / 1}};
  CHECK(parse_iso8601("2010-01-01T00:00:00Z") == midnight);
  CHECK(parse_iso8601("2010-01-01T00:00:00") == midnight);
  CHECK(parse_iso8601("2010-01-01 05") == midnight + hours{5});
  CHECK(parse_iso8601("2010-01-01T05:30") == midnight + hours{5} + minutes{30});
  CHECK(parse_iso8601("2012-02-29T23:59:59Z") == sys_seconds{sys_days{2012y / February / 29}} + seconds{86399});
  CHECK_THROWS_AS(parse_iso8601("2011-02-29T00"), InvalidInput);
  CHECK_THROWS_AS(parse_iso8601("2010-13-01T00"), InvalidInput);
  CHECK_THROWS_AS(parse_iso8601("2010-01-01T24"), InvalidInput);
  CHECK_THROWS_AS(parse_iso8601("yesterday"), InvalidInput);
  CHECK_THROWS_AS(parse_iso8601("2010-01-01T00:00:00+02:00"), InvalidInput);
}

TEST_CASE("month labels and seasons") {
  CHECK(month_label(2010, 1) == "Jan 10");
  CHECK(month_label(2009, 12) == "Dec 09");
  CHECK_THROWS_AS(month_label(2010, 13), InvalidInput);
  int winter = 0, summer = 0;
  for (unsigned m = 1; m <= 12; ++m) {
    winter += is_winter_month(m);
    summer += is_summer_month(m);
    CHECK_FALSE((is_winter_month(m) && is_summer_month(m)));
  }
  CHECK(winter == 4);
  CHECK(summer == 4);
}

TEST_CASE("eight years of hourly data split into monthly series") {
  const auto records = hourly_records(2010, 2017);
  const MonthlySplit seasonal = monthly_split(records, MonthFilter::WinterSummer);
  CHECK(seasonal.months.size() == 64);
  CHECK(seasonal.warnings.empty());
  CHECK(seasonal.months.front().label == "Jan 10");
  CHECK(seasonal.months.back().label == "Dec 17");
  CHECK(seasonal.months.front().series.size() == 31 * 24);
  for (const auto& m : seasonal.months) CHECK((is_winter_month(m.month) || is_summer_month(m.month)));

  const MonthlySplit all = monthly_split(records, MonthFilter::All);
  CHECK(all.months.size() == 96);
  CHECK(all.months[1].label == "Feb 10");
  CHECK(all.months[1].series.size() == 28 * 24);
  CHECK(all.months[25].series.size() == 29 * 24);  // Feb 2012

  std::vector<WindRecord> sparse;
  for (const auto& r : records) {
    if (r.timestamp < sys_seconds{sys_days{2010y / February / 1}}) sparse.push_back(r);
  }
  CHECK(monthly_split(sparse, MonthFilter::All).months.size() == 1);
  sparse.push_back({sys_seconds{sys_days{2010y / June / 15}}, 1.0, "A"});
  const MonthlySplit dropped = monthly_split(sparse, MonthFilter::All);
  CHECK(dropped.months.size() == 1);
  REQUIRE(dropped.warnings.size() == 1);
  CHECK(dropped.warnings[0].find("Jun 10") != std::string::npos);
  CHECK_THROWS_AS(monthly_split({}, MonthFilter::All), InvalidInput);
}

TEST_CASE("wind input becomes labeled monthly series with seasonal truth") {
  TempDir dir("windinput");
  const std::string path = dir.file("wind.csv");
  CHECK(fixture::write_two_regime_wind_csv(path, 2015, 2015, 3) == 8);
  RunConfig c;
  c.input = path;
  const LabeledInput in = load_input(c);
  REQUIRE(in.series.size() == 8);
  CHECK(in.labels.front() == "Jan 15");
  CHECK(in.truth == std::vector<int>{0, 0, 0, 1, 1, 1, 1, 0});
  CHECK(in.ingest_report.at("rejected") == 0);
  CHECK(in.ingest_report.at("station") == "SYN");

  c.months = "all";
  CHECK(load_input(c).series.size() == 12);
  CHECK(load_input(c).truth.empty());
  c.months = "spring";
  CHECK_THROWS_AS(load_input(c), InvalidConfig);
  c.months = "winter-summer";
  c.station = "ZZZ";
  CHECK_THROWS_AS(load_input(c), InvalidConfig);
}

TEST_CASE("series CSV input is read row by row") {
  TempDir dir("series");
  const std::string path = dir.file("series.csv");
  write_series_csv(path, {CircularSeries({0.1, 0.2, 0.3}), CircularSeries({1.0, 2.0})}, {"a", "b"});
  RunConfig c;
  c.input = path;
  const LabeledInput in = load_input(c);
  CHECK(in.labels == std::vector<std::string>{"a", "b"});
  CHECK(in.series[0].size() == 3);
  CHECK(in.truth.empty());
  CHECK_THROWS_AS(load_input(RunConfig{}), InvalidConfig);
}

TEST_CASE("cluster writes one membership row per series") {
  TempDir dir("cluster");
  RunConfig c = small_cluster_config(dir.file("out"));
  const ClusterRun run = cmd_cluster(c);
  const std::size_t n = run.labels.size();
  CHECK(run.partition.memberships.rows() == static_cast<Eigen::Index>(n));
  const auto rows = lines(read_text(dir.file("out/memberships.csv")));
  REQUIRE(rows.size() == n + 1);
  CHECK(rows[0] == "series,C1,C2,C3,medoid_of");

  const Json partition = Json::parse(read_text(dir.file("out/partition.json")));
  CHECK(partition.at("config").at("clusters") == 3);
  CHECK(partition.at("config").at("fuzziness") == run.fuzziness);
  CHECK(partition.at("config").at("restarts") == 4);
  CHECK(partition.at("memberships").size() == n);
  CHECK(partition.contains("arif"));
  for (int c1 = 1; c1 <= 3; ++c1) {
    CHECK(fs::exists(dir.file("out/medoid_C" + std::to_string(c1) + "_fingerprint.csv")));
  }

  c.clusters = {static_cast<int>(n)};
  CHECK_THROWS_AS(cmd_cluster(c), InvalidConfig);
}

TEST_CASE("rerunning from a manifest reproduces every output byte for byte") {
  TempDir dir("manifest");
  const RunConfig first = small_cluster_config(dir.file("a"));
  cmd_cluster(first);
  RunConfig again = load_run_config(dir.file("a/manifest.json"));
  CHECK(again.command == "cluster");
  again.out = dir.file("b");
  cmd_cluster(again);

  const Json manifest = Json::parse(read_text(dir.file("a/manifest.json")));
  for (const auto& name : manifest.at("outputs")) {
    const std::string file = name.get<std::string>();
    CAPTURE(file);
    CHECK(read_text(dir.file("a/" + file)) == read_text(dir.file("b/" + file)));
  }
  Json other = Json::parse(read_text(dir.file("b/manifest.json")));
  other["out"] = manifest.at("out");
  CHECK(other == manifest);
}

TEST_CASE("mds on three series writes coordinates and stress") {
  TempDir dir("mds");
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::vector<CircularSeries> series;
  for (int k = 0; k < 3; ++k) {
    std::vector<double> x(120);
    for (double& v : x) v = angle(rng);
    series.emplace_back(std::move(x));
  }
  write_series_csv(dir.file("s.csv"), series, {"x", "y", "z"});
  RunConfig c;
  c.input = dir.file("s.csv");
  c.out = dir.file("out");
  const Embedding2D e = cmd_mds(c);
  const auto coords = lines(read_text(dir.file("out/coordinates.csv")));
  REQUIRE(coords.size() == 4);
  CHECK(coords[0] == "index,a,b,label");
  const Json mds = Json::parse(read_text(dir.file("out/mds.json")));
  CHECK(mds.at("stress") == e.stress);
  CHECK(e.stress >= 0.0);
  CHECK(e.stress < 1.0);

  const DissimilarityMatrix d = dissimilarity_from_json(Json::parse(read_text(dir.file("out/dissimilarity.json"))));
  CHECK(d.params.radius == 1.0);
  CHECK((matrix_from_csv(read_text(dir.file("out/dissimilarity.csv"))).array() == d.values.array()).all());

  c.out = dir.file("again");
  CHECK(cmd_mds(c).points == e.points);
}

TEST_CASE("simulate writes one row per fuzziness value") {
  TempDir dir("simulate");
  RunConfig c;
  c.scenario = 2;
  c.length = 100;
  c.trials = 2;
  c.restarts = 2;
  c.fuzziness = {1.2, 1.5};
  c.radius = {1.0};
  c.out = dir.file("out");
  const SimulationReport report = cmd_simulate(c);
  CHECK_FALSE(report.cutoff_mode);
  CHECK(report.indices.size() == 8);
  const auto arif_rows = lines(read_text(dir.file("out/arif.csv")));
  REQUIRE(arif_rows.size() == 3);
  CHECK(arif_rows[0] == "m,FL,JS,CQA,QA");
  CHECK(arif_rows[1].rfind("1.2,", 0) == 0);
  CHECK(lines(read_text(dir.file("out/trials.csv"))).size() == 1 + 8 * 2);
  CHECK(scenario_from_json(Json::parse(read_text(dir.file("out/scenario.json")))).clusters ==
        scenario(2, 100).clusters);
}

TEST_CASE("motivating writes one row per radius plus the baselines") {
  TempDir dir("motivating");
  RunConfig c;
  c.length = 100;
  c.replicates = 3;
  c.radius = {0.5, 1.5};
  c.out = dir.file("out");
  cmd_motivating(c);
  const auto rows = lines(read_text(dir.file("out/motivating.csv")));
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == "distance,radius,mean,sd,q05,q95");
  CHECK(rows[3].rfind("FL,,", 0) == 0);
  CHECK(rows[4].rfind("JS,,", 0) == 0);
}

TEST_CASE("run configurations round-trip through JSON") {
  RunConfig c;
  c.command = "simulate";
  c.scenario = 5;
  c.wrap = "arctan";
  c.lags = {1, 4};
  c.radius = {0.3, 0.9};
  c.metrics = {"CQA", "QA"};
  c.lag_test = true;
  c.seed = 0xFFFFFFFFFFFFull;
  c.threads = 3;
  const Json j = to_json(c);
  CHECK(to_json(run_config_from_json(j)) == j);
  CHECK(run_config_from_json(Json::object()).trials == RunConfig{}.trials);
  Json bad = j;
  bad["trials"] = "many";
  CHECK_THROWS_AS(run_config_from_json(bad), InvalidConfig);

  TempDir dir("config");
  CHECK_THROWS_AS(load_run_config(write_file(dir, "broken.json", "{ not json")), InvalidConfig);
}

TEST_CASE("matrix and partition serialization") {
  Eigen::MatrixXd m(2, 2);
  m << 0.0, 1.0 / 3.0, 1.0 / 3.0, 0.0;
  CHECK((matrix_from_csv(matrix_csv(m)).array() == m.array()).all());

  DissimilarityMatrix d;
  d.params = MetricParams{MetricKind::QA, {1, 2}, {0.25, 0.75}, 0.0};
  d.values = m;
  const DissimilarityMatrix back = dissimilarity_from_json(to_json(d));
  CHECK(back.params.kind == MetricKind::QA);
  CHECK(back.params.lags == d.params.lags);
  CHECK(back.params.levels == d.params.levels);
  CHECK((back.values.array() == m.array()).all());
  Json ragged = to_json(d);
  ragged["values"][1] = Json::array({0.0});
  CHECK_THROWS_AS(dissimilarity_from_json(ragged), InvalidInput);

  FuzzyPartition p;
  p.memberships = Eigen::MatrixXd::Identity(2, 2);
  p.medoids = {0, 1};
  ClusterConfig config;
  config.clusters = 2;
  config.fuzziness = 1.9;
  config.seed = 42;
  const Json j = to_json(p, config);
  CHECK(j.at("config").at("fuzziness") == 1.9);
  CHECK(j.at("config").at("seed") == 42);
  CHECK(j.at("medoids") == Json::array({0, 1}));
  CHECK(j.at("memberships")[1] == Json::array({0.0, 1.0}));
  CHECK(membership_csv(p, {"a", "b"}) == "series,C1,C2,medoid_of\na,1,0,1\nb,0,1,2\n");
}
