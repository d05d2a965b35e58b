#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include <json.hpp>

#include "mutag/analysis.hpp"

using namespace mutag;

namespace {

EventRecord record(Classification c, double err = 0.1)
{
  EventRecord r;
  r.classification = c;
  if (c == Classification::chip_miss) return r;
  r.true_chip_hit = Vec3(0.5, 0.5, 8);
  r.true_cell = QubitCell{6, 6};
  if (c == Classification::layer_miss) return r;
  r.predicted = Vec3(0.5 + err, 0.5 - 2 * err, 8);
  return r;
}

double brute_quantile(std::vector<double> v)
{
  std::sort(v.begin(), v.end());
  const auto rank = std::size_t(std::ceil(0.95 * double(v.size()) - 1e-9));
  return v[rank - 1];
}

EfficiencyReport sample_report()
{
  EfficiencyTally t;
  t.n_generated = 1000;
  for (auto c : {Classification::hit_1x1, Classification::hit_1x1, Classification::hit_3x3,
                 Classification::on_chip, Classification::layer_miss,
                 Classification::off_chip_prediction, Classification::chip_miss}) {
    t.accumulate(record(c));
  }
  ReportMeta m;
  m.config_id = "table2_row1";
  m.pitch_top_um = 500;
  m.pitch_bottom_um = 220;
  m.nx_top = m.nx_bottom = 390;
  m.ny_top = m.ny_bottom = 400;
  m.dz_top_mm = 242;
  m.dz_bottom_mm = 92;
  m.seed = 1;
  m.angle_model = "solid_angle";
  return finalize(t, m);
}

}  // namespace

TEST_CASE("accumulate")
{
  EfficiencyTally t;
  t.accumulate(record(Classification::chip_miss));
  CHECK(t.n_chip_hits == 0);
  CHECK(t.residuals_x.empty());

  t.accumulate(record(Classification::hit_1x1));
  CHECK(t.n_chip_hits == 1);
  CHECK(t.n_1x1 == 1);
  CHECK(t.n_3x3 == 1);
  CHECK(t.n_5x5 == 1);
  CHECK(t.n_on_chip == 1);
  CHECK(t.residuals_x.size() == 1);
  CHECK(t.residuals_y.front() == doctest::Approx(0.2));

  t.accumulate(record(Classification::layer_miss));
  CHECK(t.n_chip_hits == 2);
  CHECK(t.n_layer_miss == 1);
  CHECK(t.n_on_chip == 1);

  t.accumulate(record(Classification::off_chip_prediction));
  CHECK(t.n_off_chip == 1);
  CHECK(t.residuals_x.size() == 1);

  t.accumulate(record(Classification::hit_5x5));
  CHECK(t.n_1x1 == 1);
  CHECK(t.n_3x3 == 1);
  CHECK(t.n_5x5 == 2);
  CHECK(t.n_on_chip == 2);
}

TEST_CASE("merging partial tallies is order independent")
{
  std::mt19937_64 gen(1);
  std::vector<EventRecord> records;
  for (int k = 0; k < 5000; ++k) {
    const auto c = Classification(gen() % 7);
    records.push_back(record(c, double(gen() % 1000) / 1000));
  }
  EfficiencyTally whole;
  for (const auto& r : records) whole.accumulate(r);

  std::vector<EfficiencyTally> parts(4);
  for (std::size_t k = 0; k < records.size(); ++k) parts[(k * 7919) % 4].accumulate(records[k]);
  EfficiencyTally ab, ba;
  for (int k : {0, 1, 2, 3}) ab.merge(parts[k]);
  for (int k : {3, 1, 0, 2}) ba.merge(parts[k]);

  for (const EfficiencyTally* t : {&ab, &ba}) {
    CHECK(t->n_chip_hits == whole.n_chip_hits);
    CHECK(t->n_1x1 == whole.n_1x1);
    CHECK(t->n_3x3 == whole.n_3x3);
    CHECK(t->n_5x5 == whole.n_5x5);
    CHECK(t->n_on_chip == whole.n_on_chip);
    CHECK(t->n_layer_miss == whole.n_layer_miss);
    CHECK(t->n_off_chip == whole.n_off_chip);
    CHECK(quantile95(t->residuals_x) == quantile95(whole.residuals_x));
    CHECK(quantile95(t->residuals_y) == quantile95(whole.residuals_y));
  }
}

TEST_CASE("quantile95")
{
  std::vector<double> ints;
  for (int k = 1; k <= 100; ++k) ints.push_back(k);
  std::shuffle(ints.begin(), ints.end(), std::mt19937_64(2));
  CHECK(quantile95(ints) == 95.0);
  CHECK(quantile95(std::vector<double>(1000, 0.23)) == 0.23);
  CHECK_FALSE(quantile95(std::vector<double>{}));
  CHECK(quantile95(std::vector<double>{3.0}) == 3.0);

  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(0, 5);
  for (std::size_t n = 1; n <= 10000; n = n * 3 + 1) {
    std::vector<double> v(n);
    for (auto& x : v) x = u(gen);
    CHECK(quantile95(v) == brute_quantile(v));
  }

  std::normal_distribution<double> normal;
  std::vector<double> half(1'000'000);
  for (auto& x : half) x = std::abs(normal(gen));
  CHECK(*quantile95(half) == doctest::Approx(1.96).epsilon(0.01 / 1.96));
}

TEST_CASE("binomial error")
{
  const Efficiency e = binomial_efficiency(77, 100);
  CHECK(e.value == doctest::Approx(0.77));
  CHECK(e.error == doctest::Approx(std::sqrt(0.77 * 0.23 / 100)));
}

TEST_CASE("empty report")
{
  ReportMeta meta;
  meta.config_id = "empty";
  const EfficiencyReport r = finalize(EfficiencyTally{}, meta);
  CHECK(r.n_generated == 0);
  CHECK(r.n_chip_hits == 0);
  CHECK_FALSE(r.eff_1x1);
  CHECK_FALSE(r.eff_any);
  CHECK_FALSE(r.delta95_x);
  const std::string csv = write_report(r, ReportFormat::csv);
  CHECK(csv.find("empty,0,0,0,0,0,0,0,0,0,0,,,,,,,,,,,0\n") != std::string::npos);
  const auto j = nlohmann::json::parse(write_report(r, ReportFormat::json));
  CHECK(j["eff_any_pct"].is_null());
}

TEST_CASE("report serialisation")
{
  const EfficiencyReport r = sample_report();
  CHECK(r.n_chip_hits == 6);
  CHECK(r.eff_any->value == doctest::Approx(4.0 / 6));

  const std::string csv = write_report(r, ReportFormat::csv);
  CHECK(csv == write_report(sample_report(), ReportFormat::csv));
  CHECK(csv.substr(0, csv.find('\n')) == csv_header());
  CHECK(csv.find("table2_row1,500,220,390,400,390,400,242,92,1000,6,33.3333,50.0000,50.0000,"
                 "66.6667,") != std::string::npos);

  const std::string json = write_report(r, ReportFormat::json);
  CHECK(json == write_report(sample_report(), ReportFormat::json));
  const auto j = nlohmann::json::parse(json);
  CHECK(j["config_id"] == "table2_row1");
  CHECK(j["n_chip_hits"] == 6);
  CHECK(j["eff_any_pct"].get<double>() == doctest::Approx(66.6667).epsilon(1e-5));
  CHECK(j["run"]["residual_population"] == "on_chip_predictions");

  const std::vector<EfficiencyReport> two{r, r};
  CHECK(nlohmann::json::parse(write_reports(two, ReportFormat::json)).size() == 2);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
}

TEST_CASE("save_output names the path on failure")
{
  CHECK_THROWS_WITH_AS(save_output("/nonexistent-dir/x.csv", "a"),
                       doctest::Contains("/nonexistent-dir/x.csv"), std::runtime_error);
  const auto path = std::filesystem::temp_directory_path() / "mutag_save_test.csv";
  save_output(path, "abc\n");
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "abc");
  std::filesystem::remove(path);
}
