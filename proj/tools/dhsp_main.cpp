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

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "dhsp/harness.hpp"

namespace {

// DHSP_SEED supplies the default seed; --seed wins.
std::uint64_t env_seed() {
  const char* s = std::getenv("DHSP_SEED");
  if (s == nullptr || *s == '\0') return 0;
  return std::stoull(s);
}

void add_common(CLI::App* cmd, dhsp::harness::ExperimentSpec& spec, std::string& variant,
                std::string& d, std::string& format, std::string& out) {
  cmd->add_option("--variant", variant, "kuperberg or regev")
      ->check(CLI::IsMember({"kuperberg", "regev"}));
  cmd->add_option("--n", spec.n, "secret bit length, N = 2^n");
  cmd->add_option("--k", spec.k, "pipeline stages");
  cmd->add_option("--l", spec.l, "block width (regev)");
  cmd->add_option("--d", d, "hidden secret, or 'random'");
  cmd->add_option("--seed", spec.seed, "64-bit seed");
  cmd->add_option("--trials", spec.trials, "independent trials");
  cmd->add_option("--budget", spec.budget, "fresh objects per attempt (0 = default)");
  cmd->add_option("--max-retries", spec.max_retries, "budget doublings per level");
  cmd->add_option("--out", out, "output path (default stdout)");
  cmd->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_flag("--wall-time", spec.wall_time, "report wall-clock columns");
}

}  // namespace

int main(int argc, char** argv) {
  namespace h = dhsp::harness;
  CLI::App app{"Dihedral hidden subgroup sieve simulator"};
  app.require_subcommand(1);

  h::ExperimentSpec spec;
  std::string variant;
  std::string d = "random";
  std::string format = "csv";
  std::string out_path;
  std::string grid;

  try {
    spec.seed = env_seed();
  } catch (const std::exception&) {
    std::cerr << "DHSP_SEED is not an unsigned integer\n";
    return h::kExitUsage;
  }

  auto* run = app.add_subcommand("run", "recover d end to end");
  auto* bench = app.add_subcommand("bench", "time/space scaling over an n grid");
  auto* verify = app.add_subcommand("verify", "statistical verification suites");
  for (auto* cmd : {run, bench, verify}) add_common(cmd, spec, variant, d, format, out_path);
  bench->add_option("--n-grid", grid, "comma-separated n values");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : h::kExitUsage;
  }

  try {
    spec.subcommand = app.get_subcommands().front()->get_name();
    if (!variant.empty()) spec.variant = dhsp::parse_variant(variant);
    if (d != "random") spec.d = std::stoull(d);
    spec.format = format == "json" ? h::Format::kJson : h::Format::kCsv;
    if (!grid.empty()) {
      std::size_t pos = 0;
      while (pos <= grid.size()) {
        const auto comma = grid.find(',', pos);
        spec.n_grid.push_back(std::stoi(grid.substr(pos, comma - pos)));
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
    }
    spec.validate();
  } catch (const std::exception& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return h::kExitUsage;
  }

  try {
    if (out_path.empty()) return h::dispatch(spec, std::cout);
    std::ofstream file(out_path);
    if (!file) {
      std::cerr << "cannot open " << out_path << "\n";
      return h::kExitUsage;
    }
    return h::dispatch(spec, file);
  } catch (const dhsp::ParameterError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return h::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return h::kExitFailure;
  }
}
