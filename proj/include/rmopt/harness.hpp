#pragma once

#include "rmopt/extended_rsdfo.hpp"
#include "rmopt/objectives.hpp"
#include "rmopt/pso.hpp"
#include "rmopt/record.hpp"
#include "rmopt/trust_region.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace rmopt {

enum class AlgoKind : std::uint8_t { ExtRsdfo, Rcmaes, Rtr, Rpso };

std::string to_string(AlgoKind a);
AlgoKind algo_from_string(const std::string& s);

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One experiment: a named benchmark, one algorithm with its parameters, a
/// run count, an evaluation budget and a base seed (run i uses seed_base + i).
struct ExperimentSpec {
  std::string name;
  std::string objective;  // "s2" | "gr24" | "gr25" | "jl"
  AlgoKind algorithm = AlgoKind::ExtRsdfo;
  long long runs = 1;
  long long budget = 10000;
  std::uint64_t seed_base = 1000;

  // ext-rsdfo
  ExtendedConfig ext;
  int initial_centroids = 2;
  // rcmaes
  int cma_m1 = 40;
  // rpso
  int agents = 20;
  // rtr
  RtrConfig rtr;

  void validate() const;
};

/// Executes a single seeded run of the spec's algorithm and classifies it.
RunRecord execute_run(const ExperimentSpec& spec, std::uint64_t seed);

/// Executes all runs (seeds seed_base .. seed_base + runs - 1), optionally on
/// a worker pool; the result is ordered by seed and independent of `jobs`.
std::vector<RunRecord> run_experiment(const ExperimentSpec& spec, int jobs = 1);

/// Convergence class of a finished run: "global"/"local" for the sphere and
/// Grassmann benchmarks, "ll"/"lg"/"gl"/"gg" (torus+angles) for the ladder.
std::string classify(const Objective& objective, const RunRecord& record);

/// Class labels used by the given benchmark, in reporting order.
std::vector<std::string> class_labels(const std::string& objective_id);

struct SummaryRow {
  std::string spec;
  long long runs = 0;
  std::map<std::string, long long> class_counts;
  double avg_evaluations = 0.0;
};

struct SummaryTable {
  std::vector<SummaryRow> rows;
};

SummaryTable summarize(const std::vector<ExperimentSpec>& specs,
                       const std::vector<RunRecord>& records);

/// Renders the summary as an aligned text table.
std::string format_summary(const SummaryTable& table, const std::string& objective_id);

/// Writes records.json (full records; timestamp confined to one metadata
/// field), summary.csv (one row per run) and per-spec trace_<seed>.csv files
/// under out_dir. Returns the records.json path.
std::string emit(const std::string& out_dir, const std::vector<ExperimentSpec>& specs,
                 const std::vector<RunRecord>& records, bool write_traces = true);

/// Serialization used by emit/summarize round-trips.
std::string records_to_json(const std::vector<ExperimentSpec>& specs,
                            const std::vector<RunRecord>& records,
                            const std::string& timestamp);
std::vector<RunRecord> records_from_json(const std::string& json_text,
                                         std::vector<ExperimentSpec>* specs = nullptr);

/// The four built-in experiment setups ("s2", "gr24", "gr25", "jl") expanded
/// into one spec per algorithm variant, reproducing the benchmark protocol.
/// With desk == true the run counts are reduced to 50 for quick reproduction.
std::vector<ExperimentSpec> builtin_specs(bool desk = false);
std::vector<std::string> builtin_setups();
std::vector<ExperimentSpec> specs_for_setup(const std::string& setup, bool desk = false);

/// Parses a declarative key = value config with [sections]; throws
/// ConfigError on unknown keys or invalid values.
ExperimentSpec parse_config_text(const std::string& text);
ExperimentSpec parse_config_file(const std::string& path);

}  // namespace rmopt
