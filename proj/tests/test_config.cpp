// Copyright 2026 the pptem project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "pptem/config.hpp"
#include "pptem/csv.hpp"

using namespace pptem;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  const std::string path = (std::filesystem::temp_directory_path() / name).string();
  std::ofstream out(path);
  out << content;
  return path;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string body_of(const std::string& csv) {
  std::istringstream in(csv);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') continue;
    out << line << "\n";
  }
  return out.str();
}

}  // namespace

TEST_CASE("a minimal config gets the benchmark defaults") {
  const std::string file = write_temp("pptem_minimal.cfg", "model = ginzburg_landau\n");
  const RunConfig cfg = parse_config(file, {}, "converge");
  CHECK(cfg.model == "ginzburg_landau");
  CHECK(cfg.T == 1.0);
  CHECK(cfg.ref_delta == std::ldexp(1.0, -14));
  REQUIRE(cfg.test_deltas.size() == 5);
  CHECK(cfg.test_deltas.front() == std::ldexp(1.0, -8));
  CHECK(cfg.test_deltas.back() == std::ldexp(1.0, -12));
  CHECK(cfg.paths == 100000);
  CHECK(cfg.schemes.size() == 1);
  CHECK(cfg.schemes.front() == SchemeKind::pptem);
}

TEST_CASE("command-line overrides beat file values") {
  const std::string file = write_temp("pptem_paths.cfg", "model = ginzburg_landau\npaths = 500\n");
  const RunConfig cfg = parse_config(file, {{"paths", "1000"}}, "converge");
  CHECK(cfg.paths == 1000);
}

TEST_CASE("power-of-two shorthand and lists parse") {
  const RunConfig cfg = parse_config(std::nullopt,
                                     {{"model", "ginzburg_landau"},
                                      {"ref_delta", "2^-10"},
                                      {"test_deltas", "2^-6, 2^-7 2^-8"}},
                                     "converge");
  CHECK(cfg.ref_delta == std::ldexp(1.0, -10));
  REQUIRE(cfg.test_deltas.size() == 3);
  CHECK(cfg.test_deltas[1] == std::ldexp(1.0, -7));
}

TEST_CASE("unknown model names list the catalog") {
  CHECK_THROWS_WITH_AS(parse_config(std::nullopt, {{"model", "heston"}}, "converge"),
                       doctest::Contains("available:"), std::invalid_argument);
}

TEST_CASE("unknown keys are rejected with their location") {
  const std::string file =
      write_temp("pptem_badkey.cfg", "model = ginzburg_landau\nwibble = 3\n");
  CHECK_THROWS_WITH_AS(parse_config(file, {}, "converge"), doctest::Contains(":2"),
                       std::invalid_argument);
  CHECK_THROWS_AS(parse_config(std::nullopt, {{"model", "cev"}, {"frobnicate", "1"}}, "positivity"),
                  std::invalid_argument);
}

TEST_CASE("sections apply only to their subcommand") {
  const std::string file = write_temp("pptem_sections.cfg",
                                      "model = ginzburg_landau\n"
                                      "[positivity]\n"
                                      "paths = 77\n"
                                      "[converge]\n"
                                      "paths = 99\n");
  CHECK(parse_config(file, {}, "converge").paths == 99);
  CHECK(parse_config(file, {}, "positivity").paths == 77);
}

TEST_CASE("step sizes must divide the horizon") {
  CHECK_THROWS_AS(parse_config(std::nullopt,
                               {{"model", "ginzburg_landau"}, {"T", "1"}, {"delta", "0.3"}},
                               "simulate"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_config(std::nullopt,
                               {{"model", "ginzburg_landau"}, {"test_deltas", "2^-8 0.011"}},
                               "converge"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_config(std::nullopt, {{"model", "cev"}, {"scheme", "milstein"}}, "converge"),
                  std::invalid_argument);
}

TEST_CASE("converge writes a csv that round-trips bit-exactly") {
  const std::string out_dir =
      (std::filesystem::temp_directory_path() / "pptem_roundtrip").string();
  RunConfig cfg = parse_config(std::nullopt,
                               {{"model", "ginzburg_landau"},
                                {"paths", "50"},
                                {"ref_delta", "2^-8"},
                                {"test_deltas", "2^-4 2^-5 2^-6"},
                                {"threads", "2"},
                                {"emit_timestamp", "0"},
                                {"out_dir", out_dir}},
                               "converge");
  const RunResult result = run(cfg);
  CHECK(result.exit_code == 0);
  REQUIRE(result.files_written.size() == 2);

  const std::string csv = slurp(result.files_written.front());
  const auto rows = parse_csv_numbers(csv);
  REQUIRE(rows.size() == 4);  // three data rows plus the fitted-order trailer
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(rows[i].size() == 3);
    // 17-significant-digit serialisation recovers the double exactly.
    CHECK(std::strtod(format_double(rows[i][1]).c_str(), nullptr) == rows[i][1]);
    CHECK(rows[i][1] > 0.0);
  }
}

TEST_CASE("identical config and seed give byte-identical bodies across worker counts") {
  std::string bodies[3];
  int i = 0;
  for (const char* threads : {"1", "2", "8"}) {
    const std::string out_dir =
        (std::filesystem::temp_directory_path() / ("pptem_det" + std::string(threads))).string();
    RunConfig cfg = parse_config(std::nullopt,
                                 {{"model", "hiv_aids"},
                                  {"paths", "60"},
                                  {"ref_delta", "2^-8"},
                                  {"test_deltas", "2^-5 2^-6"},
                                  {"threads", threads},
                                  {"out_dir", out_dir}},
                                 "converge");
    const RunResult result = run(cfg);
    REQUIRE(result.exit_code == 0);
    bodies[i++] = body_of(slurp(result.files_written.front()));
  }
  CHECK(bodies[0] == bodies[1]);
  CHECK(bodies[0] == bodies[2]);
  CHECK_FALSE(bodies[0].empty());
}

TEST_CASE("positivity run mirrors the table layout") {
  const std::string out_dir =
      (std::filesystem::temp_directory_path() / "pptem_table").string();
  RunConfig cfg = parse_config(std::nullopt,
                               {{"model", "cev"},
                                {"schemes", "em,tem,pptem"},
                                {"deltas", "2^-2 2^-3 2^-4 2^-5"},
                                {"paths", "300"},
                                {"threads", "2"},
                                {"out_dir", out_dir}},
                               "positivity");
  const RunResult result = run(cfg);
  CHECK(result.exit_code == 0);
  const auto rows = parse_csv_numbers(slurp(result.files_written.front()));
  CHECK(rows.size() == 12);  // three schemes x four step sizes
}

TEST_CASE("strict single-path simulation exits distinctly on divergence") {
  const std::string out_dir =
      (std::filesystem::temp_directory_path() / "pptem_strict").string();
  // Seed 1, path 0 of the comparator on the competitive system leaves the
  // positive cone before T = 1.
  RunConfig cfg = parse_config(std::nullopt,
                               {{"model", "lotka_volterra_3d"},
                                {"scheme", "em"},
                                {"delta", "2^-8"},
                                {"seed", "1"},
                                {"strict", "1"},
                                {"out_dir", out_dir}},
                               "simulate");
  CHECK(run(cfg).exit_code == 3);

  cfg.schemes = {SchemeKind::pptem};
  CHECK(run(cfg).exit_code == 0);
}

TEST_CASE("list-models needs no model argument") {
  const RunConfig cfg = parse_config(std::nullopt, {}, "list-models");
  CHECK(run(cfg).exit_code == 0);
}
