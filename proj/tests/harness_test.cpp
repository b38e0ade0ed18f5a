// Copyright 2026 The dhsp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dhsp/harness.hpp"

#include <gtest/gtest.h>

#include <json.hpp>
#include <sstream>

using namespace dhsp;
using namespace dhsp::harness;

namespace {

ExperimentSpec run_spec(Variant v, int n, int k, int l, std::optional<std::uint64_t> d) {
  ExperimentSpec s;
  s.subcommand = "run";
  s.variant = v;
  s.n = n;
  s.k = k;
  s.l = l;
  s.d = d;
  s.seed = 1;
  return s;
}

std::string capture(const ExperimentSpec& spec, int& code) {
  std::ostringstream out;
  code = dispatch(spec, out);
  return out.str();
}

}  // namespace

TEST(harness, run_regev_example) {
  int code = -1;
  const auto text = capture(run_spec(Variant::kRegev, 13, 3, 4, 5000), code);
  EXPECT_EQ(code, kExitOk);
  EXPECT_NE(text.find(",5000,5000,true,"), std::string::npos) << text;
}

TEST(harness, run_zero_secret) {
  int code = -1;
  const auto text = capture(run_spec(Variant::kKuperberg, 10, 3, 0, 0), code);
  EXPECT_EQ(code, kExitOk);
  EXPECT_NE(text.find(",0,0,true,"), std::string::npos) << text;
}

TEST(harness, usage_errors) {
  auto bad = run_spec(Variant::kRegev, 12, 3, 4, std::nullopt);
  EXPECT_THROW(bad.validate(), ParameterError);
  auto no_n = run_spec(Variant::kRegev, 12, 3, 4, std::nullopt);
  no_n.n.reset();
  EXPECT_THROW(no_n.validate(), ParameterError);
  auto big_d = run_spec(Variant::kKuperberg, 10, 3, 0, 1024);
  EXPECT_THROW(big_d.validate(), ParameterError);
  ExperimentSpec bench;
  bench.subcommand = "bench";
  EXPECT_THROW(bench.validate(), ParameterError);
  ExperimentSpec unknown;
  unknown.subcommand = "plot";
  EXPECT_THROW(unknown.validate(), ParameterError);
}

TEST(harness, recovery_failure_exits_nonzero) {
  auto spec = run_spec(Variant::kRegev, 13, 3, 4, 77);
  spec.budget = 10;
  spec.max_retries = 0;
  int code = -1;
  const auto text = capture(spec, code);
  EXPECT_EQ(code, kExitFailure);
  EXPECT_NE(text.find(",false,"), std::string::npos);
}

TEST(harness, bench_schema_and_space_check) {
  ExperimentSpec spec;
  spec.subcommand = "bench";
  spec.n_grid = {10, 1, 5};
  spec.trials = 2;
  spec.seed = 4;
  spec.format = Format::kJson;
  int code = -1;
  const auto parsed = nlohmann::json::parse(capture(spec, code));
  EXPECT_EQ(code, kExitOk);
  ASSERT_EQ(parsed.size(), 6u);
  EXPECT_EQ(parsed[0]["n"], 1);
  EXPECT_EQ(parsed[0]["status"], "SKIPPED");
  EXPECT_EQ(parsed[2]["n"], 5);
  for (const auto& rec : parsed) {
    ASSERT_EQ(rec.size(), bench_columns().size());
    for (const auto& c : bench_columns()) ASSERT_TRUE(rec.contains(c)) << c;
    EXPECT_TRUE(rec["mean_wall_ms"].is_null());
    if (rec["variant"] == "regev" && rec["status"] == "ok") EXPECT_EQ(rec["space_ok"], true);
  }
}

TEST(harness, bench_csv_header_order) {
  ExperimentSpec spec;
  spec.subcommand = "bench";
  spec.n = 5;
  spec.variant = Variant::kKuperberg;
  int code = -1;
  const auto text = capture(spec, code);
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "n,variant,k,l,trials,success_rate,mean_queries,mean_fresh_objects,mean_peak_live,"
            "mean_wall_ms,max_peak_live,space_bound,space_ok,status");
}

TEST(harness, kuperberg_peak_grows_and_budget_holds) {
  ExperimentSpec spec;
  spec.subcommand = "bench";
  spec.variant = Variant::kKuperberg;
  spec.n_grid = {5, 10, 17};
  spec.trials = 20;
  spec.seed = 9;
  spec.max_retries = 0;
  spec.format = Format::kJson;
  int code = -1;
  const auto parsed = nlohmann::json::parse(capture(spec, code));
  ASSERT_EQ(parsed.size(), 3u);
  EXPECT_LT(parsed[0]["mean_peak_live"].get<double>(), parsed[1]["mean_peak_live"].get<double>());
  EXPECT_LT(parsed[1]["mean_peak_live"].get<double>(), parsed[2]["mean_peak_live"].get<double>());
  EXPECT_LE(parsed[1]["mean_fresh_objects"].get<double>(), 32768.0);
}

TEST(harness, verify_passes_all_suites) {
  ExperimentSpec spec;
  spec.subcommand = "verify";
  spec.seed = 3;
  int code = -1;
  const auto text = capture(spec, code);
  EXPECT_EQ(code, kExitOk) << text;
}

TEST(harness, identical_specs_give_identical_bytes) {
  for (const char* sub : {"run", "bench", "verify"}) {
    ExperimentSpec spec;
    spec.subcommand = sub;
    spec.variant = Variant::kRegev;
    spec.n = 9;
    spec.n_grid = {9};
    spec.seed = 42;
    spec.trials = 2;
    for (Format f : {Format::kCsv, Format::kJson}) {
      spec.format = f;
      int c1 = -1, c2 = -1;
      EXPECT_EQ(capture(spec, c1), capture(spec, c2)) << sub;
      EXPECT_EQ(c1, c2);
    }
  }
}

TEST(harness, wall_time_is_opt_in) {
  auto spec = run_spec(Variant::kKuperberg, 10, 3, 0, 1);
  int code = -1;
  EXPECT_NE(capture(spec, code).find(",null\n"), std::string::npos);
  spec.wall_time = true;
  EXPECT_EQ(capture(spec, code).find(",null\n"), std::string::npos);
}
