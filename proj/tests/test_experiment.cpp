#include <doctest.h>

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sketchlb/experiment.hpp"

using namespace sketchlb;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream cell_in(line);
    std::string cell;
    while (std::getline(cell_in, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.n = 128;
  c.p = 4.0;
  c.seed = 17;
  c.trials = 300;
  c.m_list = {1, 8, 128};
  return c;
}

nlohmann::json without_wall_time(nlohmann::json j) {
  for (auto& row : j["results"]) row.erase("wall_time");
  return j;
}

}  // namespace

TEST_CASE("auto_m_list") {
  CHECK(auto_m_list(1024, 4.0, 0.25) == std::vector<std::size_t>{1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024});
  CHECK(auto_m_list(1, 4.0, 0.25) == std::vector<std::size_t>{1});
  CHECK(auto_m_list(100, 4.0, 0.25).back() == 100);
  const auto big_p = auto_m_list(1u << 16, 30.0, 0.93);
  CHECK(big_p.front() == 4);
  CHECK(big_p.back() == (1u << 16));
}

TEST_CASE("validate") {
  ExperimentConfig c = small_config();
  CHECK_NOTHROW(validate(c));
  c.trials = 99;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c = small_config();
  c.m_list = {0};
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c.m_list = {129};
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c = small_config();
  c.p = 2.0;
  CHECK_THROWS_AS(run_experiment(c), std::invalid_argument);
}

TEST_CASE("small experiment") {
  const ExperimentResult result = run_experiment(small_config());
  REQUIRE(result.records.size() == 3);
  CHECK(result.m_list == std::vector<std::size_t>{1, 8, 128});
  for (const auto& r : result.records) {
    CHECK(r.lemma1_lhs >= 1.0);
    CHECK(r.success_ceiling >= 0.5);
    CHECK(r.success_ceiling <= 1.0);
    CHECK(r.tv_hat >= 0.0);
    CHECK(r.wall_time >= 0.0);
    CHECK(100 * r.complement_size < 128);
  }
  CHECK(result.records.back().plugin_success == 1.0);
  CHECK(result.records.front().plugin_success < 1.0);
}

TEST_CASE("experiment output is reproducible apart from timing") {
  const ExperimentResult a = run_experiment(small_config());
  const ExperimentResult b = run_experiment(small_config());
  CHECK(without_wall_time(to_json(a)) == without_wall_time(to_json(b)));

  ExperimentConfig other = small_config();
  other.seed = 18;
  CHECK(without_wall_time(to_json(run_experiment(other))) != without_wall_time(to_json(a)));
}

TEST_CASE("CSV and JSON carry the same values") {
  const ExperimentResult result = run_experiment(small_config());
  std::ostringstream csv_out;
  write_result(csv_out, result, OutputFormat::Csv);
  std::ostringstream json_out;
  write_result(json_out, result, OutputFormat::Json);
  const auto rows = parse_csv(csv_out.str());
  const nlohmann::json json = nlohmann::json::parse(json_out.str());

  REQUIRE(rows.size() == 1 + result.records.size());
  const auto& header = rows.front();
  CHECK(header.front() == "m");
  CHECK(header.back() == "wall_time");
  CHECK(json["config"]["n"] == 128);
  CHECK(json["config"]["m_list"].size() == 3);
  for (std::size_t r = 0; r < result.records.size(); ++r) {
    const auto& jrow = json["results"][r];
    REQUIRE(rows[r + 1].size() == header.size());
    for (std::size_t c = 0; c < header.size(); ++c) {
      const std::string& cell = rows[r + 1][c];
      const auto& value = jrow.at(header[c]);
      CAPTURE(header[c]);
      if (value.is_boolean()) {
        CHECK(cell == (value.get<bool>() ? "true" : "false"));
      } else if (value.is_null()) {
        CHECK(cell == "inf");
      } else {
        CHECK(std::stod(cell) == value.get<double>());
      }
    }
  }
}

TEST_CASE("sweep") {
  const auto rows = run_sweep(4.0, std::nullopt, 1024, 1u << 20);
  REQUIRE(rows.size() == 11);
  CHECK(rows.front().n == 1024);
  CHECK(rows.back().n == (1u << 20));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].m_threshold_real > rows[i - 1].m_threshold_real);
    CHECK(rows[i].chi2_bound_at_threshold < rows[i - 1].chi2_bound_at_threshold);
    CHECK(rows[i].C1 == rows[0].C1);
    CHECK(rows[i].m_threshold == 0);
  }
  std::ostringstream csv;
  write_sweep(csv, rows, 4.0, 0.25, OutputFormat::Csv);
  CHECK(parse_csv(csv.str()).size() == 12);
  std::ostringstream js;
  write_sweep(js, rows, 4.0, 0.25, OutputFormat::Json);
  CHECK(nlohmann::json::parse(js.str())["results"].size() == 11);
  CHECK_THROWS_AS(run_sweep(4.0, std::nullopt, 0, 10), std::invalid_argument);
  CHECK_THROWS_AS(run_sweep(4.0, std::nullopt, 10, 5), std::invalid_argument);
}
