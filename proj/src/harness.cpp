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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <json.hpp>
#include <sstream>

#include "dhsp/combine.hpp"
#include "dhsp/exactsim.hpp"
#include "dhsp/oracle.hpp"
#include "dhsp/recovery.hpp"
#include "dhsp/sieve.hpp"
#include "dhsp/stats.hpp"

namespace dhsp::harness {
namespace {

using Row = nlohmann::ordered_json;

class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add(Row row) {
    Row ordered;
    for (const auto& c : columns_) ordered[c] = row.contains(c) ? row[c] : Row(nullptr);
    rows_.push_back(std::move(ordered));
  }

  void write(std::ostream& out, Format format) const {
    if (format == Format::kJson) {
      Row arr = Row::array();
      for (const auto& r : rows_) arr.push_back(r);
      out << arr.dump(2) << "\n";
      return;
    }
    for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << columns_[i];
    out << "\n";
    for (const auto& r : rows_) {
      for (std::size_t i = 0; i < columns_.size(); ++i) {
        const auto& v = r[columns_[i]];
        out << (i ? "," : "") << (v.is_string() ? v.get<std::string>() : v.dump());
      }
      out << "\n";
    }
  }

 private:
  std::vector<std::string> columns_;
  std::vector<Row> rows_;
};

Row nullable_ms(bool enabled, std::chrono::nanoseconds t) {
  if (!enabled) return nullptr;
  return std::chrono::duration<double, std::milli>(t).count();
}

RecoveryConfig recovery_config(const ExperimentSpec& spec, Variant variant) {
  RecoveryConfig cfg;
  cfg.variant = variant;
  cfg.k = spec.k;
  cfg.l = variant == Variant::kRegev ? spec.l : 0;
  cfg.max_retries = spec.max_retries;
  cfg.budget = spec.budget;
  return cfg;
}

std::uint64_t trial_seed(std::uint64_t seed, int trial) {
  return Rng(seed).child(static_cast<std::uint64_t>(trial)).seed();
}

Row shape_l(Variant variant, const StageSchedule& s) {
  if (variant == Variant::kKuperberg) return nullptr;
  return s.max_width();
}

}  // namespace

void ExperimentSpec::validate() {
  if (subcommand != "run" && subcommand != "bench" && subcommand != "verify") {
    throw ParameterError("unknown subcommand '" + subcommand + "'");
  }
  if (trials < 1) throw ParameterError("--trials must be >= 1");
  if (max_retries < 0) throw ParameterError("--max-retries must be >= 0");
  if (k < 0 || l < 0) throw ParameterError("--k and --l must be positive");
  std::sort(n_grid.begin(), n_grid.end());
  if (subcommand == "run") {
    if (!n) throw ParameterError("run requires --n");
    if (*n < 2 || *n > kMaxExponent) throw ParameterError("--n outside [2, 62]");
    if (d && (*d >> *n) != 0) throw ParameterError("--d must be below 2^n");
    const Variant v = variant.value_or(Variant::kKuperberg);
    if (*n > 3) recovery_config(*this, v).stages_for(*n);
  }
  if (subcommand == "bench") {
    if (n_grid.empty() && n) n_grid.push_back(*n);
    if (n_grid.empty()) throw ParameterError("bench requires --n-grid or --n");
  }
}

const std::vector<std::string>& bench_columns() {
  static const std::vector<std::string> columns = {
      "n",         "variant",       "k",           "l",         "trials",
      "success_rate", "mean_queries", "mean_fresh_objects", "mean_peak_live", "mean_wall_ms",
      "max_peak_live", "space_bound", "space_ok",    "status"};
  return columns;
}

int cmd_run(ExperimentSpec spec, std::ostream& out) {
  spec.validate();
  const Variant variant = spec.variant.value_or(Variant::kKuperberg);
  const RecoveryConfig cfg = recovery_config(spec, variant);
  const int n = *spec.n;

  Table table({"trial", "n", "variant", "k", "l", "seed", "d_true", "d_recovered", "match",
               "oracle_queries", "fresh_objects", "peak_live_objects", "final_label_zero_discards",
               "levels", "attempts", "failed_level", "wall_ms"});
  bool all_match = true;
  for (int trial = 0; trial < spec.trials; ++trial) {
    const std::uint64_t seed = trial_seed(spec.seed, trial);
    HiddenOracle oracle = HiddenOracle::create(n, spec.d, seed);
    Row row;
    row["trial"] = trial;
    row["n"] = n;
    row["variant"] = std::string(to_string(variant));
    if (n > cfg.n_min) {
      const auto top = cfg.schedule_for(n, n);
      row["k"] = top.stages();
      row["l"] = shape_l(variant, top);
    }
    row["seed"] = seed;
    row["d_true"] = oracle.ground_truth();
    const auto start = std::chrono::steady_clock::now();
    try {
      const RecoveryResult r = recover_d(oracle, cfg, Rng(seed));
      const bool match = r.d == oracle.ground_truth();
      all_match = all_match && match;
      std::uint64_t attempts = 0;
      for (const auto& level : r.levels) attempts += level.attempts.size();
      row["d_recovered"] = r.d;
      row["match"] = match;
      row["oracle_queries"] = r.total_queries;
      row["fresh_objects"] = r.total.fresh_objects;
      row["peak_live_objects"] = r.total.peak_live_objects;
      row["final_label_zero_discards"] = r.total.final_label_zero_discards;
      row["levels"] = r.levels.size();
      row["attempts"] = attempts;
    } catch (const RecoveryError& e) {
      all_match = false;
      TrialReport partial;
      for (const auto& rep : e.reports()) partial.merge(rep);
      row["match"] = false;
      row["oracle_queries"] = oracle.query_count();
      row["fresh_objects"] = partial.fresh_objects;
      row["peak_live_objects"] = partial.peak_live_objects;
      row["failed_level"] = e.level();
    }
    row["wall_ms"] = nullable_ms(spec.wall_time, std::chrono::steady_clock::now() - start);
    table.add(std::move(row));
  }
  table.write(out, spec.format);
  return all_match ? kExitOk : kExitFailure;
}

int cmd_bench(ExperimentSpec spec, std::ostream& out) {
  spec.validate();
  std::vector<Variant> variants;
  if (spec.variant) {
    variants.push_back(*spec.variant);
  } else {
    variants = {Variant::kKuperberg, Variant::kRegev};
  }

  Table table(bench_columns());
  bool all_ok = true;
  for (int n : spec.n_grid) {
    for (Variant variant : variants) {
      Row row;
      row["n"] = n;
      row["variant"] = std::string(to_string(variant));
      row["trials"] = spec.trials;
      StageSchedule schedule;
      try {
        RecoveryConfig cfg = recovery_config(spec, variant);
        // Explicit k/l only apply where they fit this n exactly.
        try {
          cfg.stages_for(n);
        } catch (const ParameterError&) {
          cfg.k = 0;
          cfg.l = 0;
        }
        schedule = cfg.schedule_for(n, n);
      } catch (const ParameterError&) {
        row["status"] = "SKIPPED";
        table.add(std::move(row));
        continue;
      }
      row["k"] = schedule.stages();
      row["l"] = shape_l(variant, schedule);

      std::uint64_t successes = 0;
      double queries = 0;
      double fresh = 0;
      double peak = 0;
      std::uint64_t max_peak = 0;
      std::chrono::nanoseconds wall{0};
      for (int trial = 0; trial < spec.trials; ++trial) {
        const std::uint64_t seed = trial_seed(spec.seed, trial);
        HiddenOracle oracle = HiddenOracle::create(n, spec.d, seed);
        TrialReport report;
        try {
          const LsbResult r =
              recover_lsb(oracle, variant, schedule, spec.budget, spec.max_retries, Rng(seed));
          report = r.total;
          if (r.bit == static_cast<int>(oracle.ground_truth() & 1)) ++successes;
        } catch (const RecoveryError& e) {
          for (const auto& rep : e.reports()) report.merge(rep);
        }
        queries += static_cast<double>(oracle.query_count());
        fresh += static_cast<double>(report.fresh_objects);
        peak += static_cast<double>(report.peak_live_objects);
        max_peak = std::max(max_peak, report.peak_live_objects);
        wall += report.wall_time;
      }
      const double t = spec.trials;
      row["success_rate"] = static_cast<double>(successes) / t;
      row["mean_queries"] = queries / t;
      row["mean_fresh_objects"] = fresh / t;
      row["mean_peak_live"] = peak / t;
      row["mean_wall_ms"] = nullable_ms(spec.wall_time, wall / spec.trials);
      row["max_peak_live"] = max_peak;
      if (variant == Variant::kRegev) {
        std::uint64_t bound = 1;
        for (int w : schedule.widths) bound += static_cast<std::uint64_t>(w + 4);
        row["space_bound"] = bound;
        row["space_ok"] = max_peak <= bound;
        all_ok = all_ok && max_peak <= bound;
      }
      row["status"] = "ok";
      table.add(std::move(row));
    }
  }
  table.write(out, spec.format);
  return all_ok ? kExitOk : kExitFailure;
}

namespace {

struct SuiteRecord {
  std::string suite;
  std::string parameters;
  double measured;
  double expected;
  double tolerance;
  bool pass;
  std::string detail;
};

SuiteRecord suite_pair_combine(const Rng& rng) {
  Rng r = rng.child(1);
  constexpr int kAttempts = 100000;
  int successes = 0;
  for (int i = 0; i < kAttempts; ++i) {
    PhaseObject a(Label(r.bits(10), 10));
    PhaseObject b(Label(r.bits(10), 10));
    if (combine_pair(std::move(a), std::move(b), r).ok()) ++successes;
  }
  const double rate = static_cast<double>(successes) / kAttempts;
  return {"pair_combine", "attempts=100000", rate, 0.5, 0.01, std::abs(rate - 0.5) <= 0.01, ""};
}

std::vector<SuiteRecord> suite_y_statistics(const Rng& rng) {
  std::vector<SuiteRecord> out;
  for (int l : {4, 6}) {
    Rng r = rng.child(10 + static_cast<std::uint64_t>(l));
    const auto stats = y_statistics(l, 10000, r);
    const std::string params = "l=" + std::to_string(l) + ";trials=10000";
    const double em = y_expected_mean(l);
    const double ev = y_expected_variance(l);
    out.push_back({"y_mean", params, stats.mean, em, 0.2, std::abs(stats.mean - em) <= 0.2, ""});
    out.push_back(
        {"y_variance", params, stats.variance, ev, 1.0, std::abs(stats.variance - ev) <= 1.0, ""});
  }
  return out;
}

std::vector<SuiteRecord> suite_z_distribution(const Rng& rng) {
  std::vector<SuiteRecord> out;
  constexpr int kN = 8;
  constexpr int kSamples = 100000;
  for (int l = 1; l <= 4; ++l) {
    Rng r = rng.child(20 + static_cast<std::uint64_t>(l));
    std::vector<std::uint64_t> y(static_cast<std::size_t>(l) + 4);
    for (auto& v : y) v = r.bits(kN);
    BlockCombineConfig cfg = BlockCombineConfig::for_block(l, 1);
    Rng exact_rng = r.child(0);
    const auto exact = exact::exact_block_combine<double>(y, kN, 0, l, exact_rng);
    std::vector<double> p(std::size_t{1} << l, 0.0);
    for (const auto& br : exact.branches) p[br.z] = br.probability;

    std::vector<std::uint64_t> counts(p.size(), 0);
    for (int s = 0; s < kSamples; ++s) {
      std::vector<PhaseObject> batch;
      for (auto v : y) batch.emplace_back(Label(v, kN));
      ++counts[*combine_block(std::move(batch), cfg, r).z];
    }
    const auto chi = chi_squared_test(counts, p);
    std::ostringstream detail;
    detail << "dof=" << chi.degrees_of_freedom << ";p=" << chi.p_value;
    out.push_back({"z_distribution", "l=" + std::to_string(l) + ";samples=100000", chi.statistic,
                   chi.critical_value, kSignificance, chi.pass, detail.str()});
  }
  return out;
}

SuiteRecord suite_throughput(const Rng& rng) {
  const auto r = stage_throughput_check(8, 4, 100, rng.child(30));
  std::ostringstream detail;
  detail << "mean_outputs=" << r.mean_outputs;
  return {"stage_throughput", "k=4;c=8;trials=100", r.pass_rate, 0.99, 0.0, r.pass_rate >= 0.99,
          detail.str()};
}

SuiteRecord suite_final_label(const Rng& rng) {
  constexpr int kN = 10;
  constexpr int kOutputs = 400;
  HiddenOracle oracle = HiddenOracle::create(kN, std::nullopt, rng.child(40).seed());
  PilePipeline pipeline(StageSchedule::uniform(kN, 3, 3), rng.child(41));
  const std::uint64_t half = std::uint64_t{1} << (kN - 1);
  int outputs = 0;
  int top = 0;
  bool labels_ok = true;
  while (outputs < kOutputs) {
    auto out = pipeline.push(oracle.sample_phase_qubit());
    if (!out) continue;
    ++outputs;
    const auto v = out->label().value();
    if (v == half) ++top;
    labels_ok = labels_ok && (v == half || v == 0);
  }
  const double freq = static_cast<double>(top) / kOutputs;
  return {"final_label_split", "n=10;k=3;outputs=400", freq, 0.5, 0.05,
          labels_ok && std::abs(freq - 0.5) <= 0.05, labels_ok ? "" : "label outside {0, 2^(n-1)}"};
}

}  // namespace

int cmd_verify(ExperimentSpec spec, std::ostream& out) {
  spec.validate();
  const Rng rng(spec.seed);
  std::vector<SuiteRecord> records;
  records.push_back(suite_pair_combine(rng));
  for (auto& r : suite_y_statistics(rng)) records.push_back(std::move(r));
  for (auto& r : suite_z_distribution(rng)) records.push_back(std::move(r));
  records.push_back(suite_throughput(rng));
  records.push_back(suite_final_label(rng));

  Table table({"suite", "parameters", "measured", "expected", "tolerance", "pass", "detail"});
  bool all = true;
  for (const auto& r : records) {
    all = all && r.pass;
    Row row;
    row["suite"] = r.suite;
    row["parameters"] = r.parameters;
    row["measured"] = r.measured;
    row["expected"] = r.expected;
    row["tolerance"] = r.tolerance;
    row["pass"] = r.pass;
    row["detail"] = r.detail;
    table.add(std::move(row));
  }
  table.write(out, spec.format);
  return all ? kExitOk : kExitFailure;
}

int dispatch(ExperimentSpec spec, std::ostream& out) {
  if (spec.subcommand == "run") return cmd_run(std::move(spec), out);
  if (spec.subcommand == "bench") return cmd_bench(std::move(spec), out);
  if (spec.subcommand == "verify") return cmd_verify(std::move(spec), out);
  throw ParameterError("unknown subcommand '" + spec.subcommand + "'");
}

}  // namespace dhsp::harness
